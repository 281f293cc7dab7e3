import math

import pytest
from hypothesis import given, strategies as st

from ljquantum.units_species import (
    SpeciesParams,
    SpeciesError,
    StatePoint,
    Statistics,
    builtin_species,
    density_per_nm3,
    derived_scales,
    rho_reduced_from_density,
    t_reduced_from_kelvin,
    temperature_kelvin,
    thermal_wavelength,
)


def test_helium_wavelengths():
    he = builtin_species("helium")
    assert thermal_wavelength(he, StatePoint(0.5, 0.1)) == pytest.approx(1.51, abs=0.01)
    assert thermal_wavelength(he, StatePoint(1.0, 0.1)) == pytest.approx(1.07, abs=0.01)
    assert thermal_wavelength(he, StatePoint(1.35, 0.1)) == pytest.approx(0.92, abs=0.01)


def test_argon_wavelength():
    ar = builtin_species("argon")
    assert thermal_wavelength(ar, StatePoint(0.5, 0.1)) == pytest.approx(0.103, abs=0.001)


def test_builtin_species_parameters():
    he = builtin_species("helium")
    assert (he.mass, he.eps_over_kB, he.sigma) == (4.003, 10.22, 0.2556)
    assert he.statistics is Statistics.BOSON
    ar = builtin_species("argon")
    assert (ar.mass, ar.eps_over_kB, ar.sigma) == (39.948, 124.0, 0.3418)
    ne = builtin_species("neon")
    assert (ne.mass, ne.eps_over_kB, ne.sigma) == (20.180, 36.68, 0.2782)


def test_unknown_species_lists_known_names():
    with pytest.raises(SpeciesError, match="argon.*helium.*neon"):
        builtin_species("xenon")


def test_invalid_parameters_rejected():
    with pytest.raises(ValueError):
        SpeciesParams("x", -1.0, 10.0, 0.3)
    with pytest.raises(ValueError):
        SpeciesParams("x", 1.0, 0.0, 0.3)
    with pytest.raises(ValueError):
        StatePoint(0.0, 0.5)
    with pytest.raises(ValueError):
        StatePoint(1.0, -0.1)


@given(st.floats(min_value=0.05, max_value=20.0))
def test_wavelength_temperature_scaling(t_star):
    he = builtin_species("helium")
    lam = thermal_wavelength(he, StatePoint(t_star, 0.1))
    lam4 = thermal_wavelength(he, StatePoint(4.0 * t_star, 0.1))
    assert lam4 == pytest.approx(lam / 2.0, rel=1e-12)


@given(st.floats(min_value=0.5, max_value=300.0))
def test_wavelength_mass_scaling(mass):
    a = SpeciesParams("a", mass, 10.0, 0.3)
    b = SpeciesParams("b", 4.0 * mass, 10.0, 0.3)
    state = StatePoint(1.0, 0.1)
    assert thermal_wavelength(b, state) == pytest.approx(
        thermal_wavelength(a, state) / 2.0, rel=1e-12
    )


@given(
    st.floats(min_value=0.05, max_value=50.0),
    st.floats(min_value=1e-6, max_value=2.0),
)
def test_reduced_si_round_trip(t_star, rho_star):
    he = builtin_species("helium")
    state = StatePoint(t_star, rho_star)
    t_kelvin = temperature_kelvin(he, state)
    rho_nm3 = density_per_nm3(he, state)
    assert t_reduced_from_kelvin(he, t_kelvin) == pytest.approx(t_star, rel=1e-12)
    assert rho_reduced_from_density(he, rho_nm3) == pytest.approx(rho_star, rel=1e-12)


def test_derived_scales():
    he = builtin_species("helium")
    state = StatePoint(0.5, 0.4)
    ds = derived_scales(he, state)
    assert ds.beta_eps == pytest.approx(2.0)
    assert ds.lambda_over_sigma == pytest.approx(1.51, abs=0.01)


def test_statistics_signs():
    assert Statistics.BOSON.sign == 1
    assert Statistics.FERMION.sign == -1
