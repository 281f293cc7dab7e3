import math

import numpy as np
import pytest
from scipy.integrate import quad

from ljquantum.oz_hnc import solve_hnc, virial_pressure, g_lookup
from ljquantum.quantum_corrections import (
    TripletModel,
    TripletQuadSpec,
    correction_report,
    hard_core_dimer,
    kinetic_energy_average,
    mean_gradsq_U,
    mean_laplacian_U,
    omega_1_2,
    omega_2_0,
    omega_2_1,
    omega_3_0,
)
from ljquantum.units_species import (
    SpeciesParams,
    StatePoint,
    Statistics,
    builtin_species,
    thermal_wavelength,
)

from conftest import COLD_STATE, GOLDEN_STATE, T1_STATE


# --- mean_laplacian_U / mean_gradsq_U -------------------------------------


def test_mean_laplacian_zero_density(pf_golden):
    assert mean_laplacian_U(pf_golden, 0.0) == 0.0


def test_mean_laplacian_core_exclusion(pf_golden):
    # deep-core integrand is killed by the g factor
    from ljquantum.potential import lj_d2u, lj_du

    q = 0.5
    val = g_lookup(pf_golden, q) * q * q * (lj_d2u(q) + 2.0 * lj_du(q) / q)
    assert abs(val) < 1e-30


def test_mean_gradsq_zero_density(pf_golden):
    triplet = TripletModel(pf_golden)
    assert mean_gradsq_U(pf_golden, triplet, 0.0) == 0.0


# --- omega_1_2 -------------------------------------------------------------


def test_omega_1_2_golden_values(pf_golden, helium):
    triplet = TripletModel(pf_golden)
    a = omega_1_2(pf_golden, triplet, GOLDEN_STATE, helium, "with_triplet")
    b = omega_1_2(pf_golden, triplet, GOLDEN_STATE, helium, "pair_only")
    assert a == pytest.approx(-0.741, abs=0.015)
    assert b == pytest.approx(-0.790, abs=0.015)


def test_omega_1_2_forms_agree_at_moderate_density(helium):
    for rho in (0.3, 0.5):
        state = StatePoint(1.5, rho)
        pf = solve_hnc(state)
        triplet = TripletModel(pf)
        a = omega_1_2(pf, triplet, state, helium, "with_triplet")
        b = omega_1_2(pf, triplet, state, helium, "pair_only")
        assert abs(a - b) / abs(b) < 0.10


def test_omega_1_2_argon_suppression(pf_golden, helium, argon):
    triplet = TripletModel(pf_golden)
    b_he = omega_1_2(pf_golden, triplet, GOLDEN_STATE, helium, "pair_only")
    b_ar = omega_1_2(pf_golden, triplet, GOLDEN_STATE, argon, "pair_only")
    lam_ratio_sq = (
        thermal_wavelength(helium, GOLDEN_STATE) / thermal_wavelength(argon, GOLDEN_STATE)
    ) ** 2
    # the ratio is exactly the Lambda^2 ratio, which is about 200
    assert b_he / b_ar == pytest.approx(lam_ratio_sq, rel=1e-12)
    assert 150 < b_he / b_ar < 260


def test_omega_1_2_unknown_form(pf_golden, helium):
    with pytest.raises(ValueError):
        omega_1_2(pf_golden, TripletModel(pf_golden), GOLDEN_STATE, helium, "both")


def test_kirkwood_superposition_is_exact_product(pf_golden):
    triplet = TripletModel(pf_golden)
    q1, q2, q12 = 1.1, 1.4, 0.9
    expected = (
        g_lookup(pf_golden, q1) * g_lookup(pf_golden, q2) * g_lookup(pf_golden, q12)
    )
    assert triplet.g3(q1, q2, q12) == expected


# --- omega_2_0 and the hard-core dimer ------------------------------------


def test_omega_2_0_ideal_override(pf_ideal):
    for lam in (0.8, 1.51):
        rho = 0.4
        got = omega_2_0(pf_ideal, lam, rho, Statistics.BOSON)
        exact = rho * rho * lam**3 * 2.0**-2.5
        assert got == pytest.approx(exact, rel=1e-8)


def test_omega_2_0_fermion_is_exact_negation(pf_cold, helium):
    lam = thermal_wavelength(helium, COLD_STATE)
    b = omega_2_0(pf_cold, lam, COLD_STATE.rho_reduced, Statistics.BOSON)
    f = omega_2_0(pf_cold, lam, COLD_STATE.rho_reduced, Statistics.FERMION)
    assert f == -b  # bit-for-bit


def test_omega_2_0_core_suppression_vs_ideal(pf_cold, helium):
    # repulsive core suppresses the dimer term ~3-4x below the ideal value
    lam = thermal_wavelength(helium, COLD_STATE)
    rho = COLD_STATE.rho_reduced
    got = omega_2_0(pf_cold, lam, rho, Statistics.BOSON)
    ideal = rho * rho * lam**3 * 2.0**-2.5
    assert got > 0.0
    assert 2.5 < ideal / got < 5.0


def test_omega_2_0_rejects_bad_lambda(pf_ideal):
    with pytest.raises(ValueError):
        omega_2_0(pf_ideal, -1.0, 0.5, Statistics.BOSON)


def _dimer_quadrature_oracle(d, lam, rho):
    val, _ = quad(lambda q: q * q * math.exp(-2.0 * math.pi * q * q / lam**2), d, np.inf)
    return 2.0 * math.pi * rho * rho * val


def test_hard_core_dimer_matches_quadrature():
    for d_over_lam in (0.5, 1.0, 2.0):
        lam, rho = 1.2, 0.4
        d = d_over_lam * lam
        oracle = _dimer_quadrature_oracle(d, lam, rho)
        got = hard_core_dimer(d, lam, rho, Statistics.BOSON, "exact_erfc")
        assert got == pytest.approx(oracle, rel=1e-10)


def test_hard_core_dimer_asymptotic_agreement():
    lam, rho = 1.0, 0.5
    d = 3.0 * lam
    exact = hard_core_dimer(d, lam, rho, Statistics.BOSON, "exact_erfc")
    asym = hard_core_dimer(d, lam, rho, Statistics.BOSON, "asymptotic")
    assert asym == pytest.approx(exact, rel=1e-3)


def test_hard_core_dimer_gaussian_suppression():
    lam, rho = 1.0, 0.5
    val = hard_core_dimer(lam, lam, rho, Statistics.BOSON, "exact_erfc")
    scale = lam**3 * rho * rho
    assert abs(val) / scale < 3.0 * math.exp(-2.0 * math.pi)
    assert abs(val) / scale > 0.1 * math.exp(-2.0 * math.pi)


def test_hard_core_dimer_validation():
    with pytest.raises(ValueError):
        hard_core_dimer(-1.0, 1.0, 0.5, Statistics.BOSON)
    with pytest.raises(ValueError):
        hard_core_dimer(1.0, 1.0, 0.5, Statistics.BOSON, mode="series")


# --- omega_2_1 -------------------------------------------------------------


def test_omega_2_1_zero_density(pf_golden, helium):
    state = StatePoint(GOLDEN_STATE.t_reduced, 0.0)
    assert omega_2_1(pf_golden, state, helium, Statistics.BOSON) == 0.0


def test_omega_2_1_boson_positive_on_liquid_branch(pf_cold, pf_t1, helium):
    for pf, state in ((pf_cold, COLD_STATE), (pf_t1, T1_STATE)):
        val = omega_2_1(pf, state, helium, Statistics.BOSON)
        assert val > 0.0
        assert omega_2_1(pf, state, helium, Statistics.FERMION) == -val


def test_omega_2_1_magnitude_ordering(pf_cold, pf_t1, helium):
    # |o20| < |o21| < |o12| at matching state points
    for pf, state in ((pf_cold, COLD_STATE), (pf_t1, T1_STATE)):
        lam = thermal_wavelength(helium, state)
        triplet = TripletModel(pf)
        o20 = omega_2_0(pf, lam, state.rho_reduced, Statistics.BOSON)
        o21 = omega_2_1(pf, state, helium, Statistics.BOSON)
        o12 = omega_1_2(pf, triplet, state, helium, "pair_only")
        assert abs(o20) < abs(o21) < abs(o12)


# --- omega_3_0 -------------------------------------------------------------


def test_omega_3_0_ideal_override(pf_ideal):
    for lam in (0.9, 1.51):
        rho = 0.4
        got = omega_3_0(pf_ideal, TripletModel(pf_ideal), lam, rho)
        exact = rho**3 * lam**6 * 3.0**-2.5
        assert got == pytest.approx(exact, rel=1e-8)


def test_omega_3_0_statistics_independent(pf_cold, helium):
    # no statistics argument exists; the report carries identical values
    lam = thermal_wavelength(helium, COLD_STATE)
    rep_b = correction_report(pf_cold, COLD_STATE, helium, Statistics.BOSON)
    rep_f = correction_report(pf_cold, COLD_STATE, helium, Statistics.FERMION)
    assert rep_b.omega_3_0 == rep_f.omega_3_0
    assert rep_b.omega_1_2_pair == rep_f.omega_1_2_pair


def test_omega_3_0_half_of_omega_2_0_when_cold(pf_cold, helium):
    lam = thermal_wavelength(helium, COLD_STATE)
    rho = COLD_STATE.rho_reduced
    o20 = omega_2_0(pf_cold, lam, rho, Statistics.BOSON)
    o30 = omega_3_0(pf_cold, TripletModel(pf_cold), lam, rho)
    assert o30 / o20 == pytest.approx(0.5, abs=0.15)


def test_triplet_quadrature_convergence(pf_cold, helium):
    lam = thermal_wavelength(helium, COLD_STATE)
    rho = COLD_STATE.rho_reduced
    triplet = TripletModel(pf_cold)
    o30 = omega_3_0(pf_cold, triplet, lam, rho)
    o30_fine = omega_3_0(
        pf_cold, triplet, lam, rho, quad=TripletQuadSpec(n_q=256, n_x=128)
    )
    assert abs(o30_fine - o30) / abs(o30) < 0.005

    pair_only = mean_gradsq_U(pf_cold, triplet, 0.0)  # rho=0 kills everything
    g = mean_gradsq_U(pf_cold, triplet, rho, lam=lam)
    g_fine = mean_gradsq_U(
        pf_cold, triplet, rho, quad=TripletQuadSpec(n_q=256, n_x=128), lam=lam
    )
    # compare the triplet parts: subtract the (identical) pair term
    from ljquantum.potential import lj_du

    r = pf_cold.grid.r
    du = lj_du(r)
    pair_term = (
        4.0
        * math.pi
        * rho
        * rho
        * np.trapezoid(
            np.concatenate(([0.0], r * r * pf_cold.g * du * du)), dx=pf_cold.grid.dr
        )
    )
    trip, trip_fine = g - pair_term, g_fine - pair_term
    assert abs(trip_fine - trip) / abs(trip) < 0.005
    assert pair_only == 0.0


# --- sign laws and classical limit -----------------------------------------


def test_statistics_sign_law(pf_t1, helium):
    rep_b = correction_report(pf_t1, T1_STATE, helium, Statistics.BOSON)
    rep_f = correction_report(pf_t1, T1_STATE, helium, Statistics.FERMION)
    assert rep_f.omega_2_0 == -rep_b.omega_2_0
    assert rep_f.omega_2_1 == -rep_b.omega_2_1
    assert rep_f.omega_3_0 == rep_b.omega_3_0
    assert rep_f.omega_1_2_pair == rep_b.omega_1_2_pair
    assert rep_f.omega_1_2_triplet == rep_b.omega_1_2_triplet


def test_classical_limit_lambda_to_zero(pf_t1):
    # enormous mass drives Lambda -> 0 and every correction below 1e-12
    heavy = SpeciesParams("heavy", 4.003e22, 10.22, 0.2556)
    rep = correction_report(pf_t1, T1_STATE, heavy, Statistics.BOSON)
    assert rep.lambda_over_sigma < 1e-10
    for val in (
        rep.omega_1_2_pair,
        rep.omega_1_2_triplet,
        rep.omega_2_0,
        rep.omega_2_1,
        rep.omega_3_0,
    ):
        assert abs(val) < 1e-12


def test_omega_2_0_monotone_below_core(pf_t1):
    # once Lambda is below the core diameter the dimer term shrinks monotonically
    rho = T1_STATE.rho_reduced
    vals = [omega_2_0(pf_t1, lam, rho, Statistics.BOSON) for lam in (0.9, 0.7, 0.5, 0.3)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(v > 0 for v in vals[:-1])


# --- kinetic energy ---------------------------------------------------------


def test_kinetic_energy_classical_limit(helium):
    state = StatePoint(1.5, 0.5)
    assert kinetic_energy_average(100, state, helium, 0.0) == pytest.approx(
        1.5 * 100 * state.t_reduced
    )


def test_kinetic_energy_correction_sign(helium):
    state = StatePoint(1.5, 0.5)
    base = kinetic_energy_average(100, state, helium, 0.0)
    assert kinetic_energy_average(100, state, helium, 1e3) > base
    assert kinetic_energy_average(100, state, helium, -1e3) < base


def test_kinetic_energy_identity_with_form_b(pf_golden, helium):
    """Correction per particle equals -T* (form b) / rho: both are the same
    Laplacian integral dressed with different prefactors."""
    state = GOLDEN_STATE
    n = 500
    volume = n / state.rho_reduced
    lap_total = mean_laplacian_U(pf_golden, state.rho_reduced) * volume
    ke = kinetic_energy_average(n, state, helium, lap_total)
    correction_per_particle = (ke - 1.5 * n * state.t_reduced) / n
    b = omega_1_2(pf_golden, TripletModel(pf_golden), state, helium, "pair_only")
    assert correction_per_particle == pytest.approx(
        -state.t_reduced * b / state.rho_reduced, rel=1e-12
    )


# --- report wiring and figure-style orderings -------------------------------


def test_correction_report_fields(pf_t1, helium):
    rep = correction_report(
        pf_t1, T1_STATE, helium, classical_pressure=virial_pressure(pf_t1, T1_STATE)
    )
    assert rep.statistics is Statistics.BOSON
    assert rep.lambda_over_sigma == pytest.approx(1.068, abs=0.01)
    assert rep.classical_pressure == pytest.approx(0.783, abs=0.01)
    assert rep.omega_1_2_pair < 0
    assert rep.omega_2_0 > 0


@pytest.fixture(scope="module")
def figure_states(helium):
    """Solved isotherm corners for the qualitative figure orderings."""
    out = {}
    for t, rho in ((0.8, 0.75), (1.0, 0.75), (1.0, 0.8)):
        state = StatePoint(t, rho)
        pf = solve_hnc(state)
        out[(t, rho)] = (
            state,
            pf,
            correction_report(pf, state, helium,
                              classical_pressure=virial_pressure(pf, state)),
        )
    return out


def test_figure_orderings(figure_states):
    cold = figure_states[(0.8, 0.75)][2]
    warm = figure_states[(1.0, 0.75)][2]
    dense = figure_states[(1.0, 0.8)][2]
    # classical pressure rises with temperature at fixed density, and with
    # density along an isotherm
    assert warm.classical_pressure > cold.classical_pressure
    assert dense.classical_pressure > warm.classical_pressure
    # non-commutativity correction: negative, larger magnitude when colder
    assert cold.omega_1_2_pair < warm.omega_1_2_pair < 0
    # symmetrization corrections: positive for bosons, larger when colder
    assert cold.omega_2_0 > warm.omega_2_0 > 0
    assert cold.omega_2_1 > warm.omega_2_1 > 0
    assert cold.omega_3_0 > warm.omega_3_0 > 0
