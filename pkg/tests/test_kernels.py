"""Cross-backend agreement and analytic/finite-difference oracles for the
pair kernels.  Both backends are imported directly so the suite covers the
numpy fallback regardless of the LJQUANTUM_KERNELS setting."""

import math

import numpy as np
import pytest

import ljquantum.kernels as kernels
import ljquantum.kernels._numpy as knp

knb = pytest.importorskip("ljquantum.kernels._numba")

from ljquantum.mc_engine import fcc_lattice
from ljquantum.potential import lj_du, lj_d2u, lj_u


@pytest.fixture(scope="module")
def liquidish():
    rng = np.random.default_rng(5)
    config = fcc_lattice(120, 0.5)
    pos = (config.positions + rng.normal(0.0, 0.06, (120, 3))) % config.box_length
    return np.ascontiguousarray(pos), config.box_length


def test_backend_selected():
    assert kernels.backend_name() in ("numba", "numpy")


def test_total_potential_cross_backend(liquidish):
    pos, box = liquidish
    a = knb.total_potential(pos, box, 3.0)
    b = knp.total_potential(pos, box, 3.0)
    assert a == pytest.approx(b, rel=1e-12)


def test_pair_observables_cross_backend(liquidish):
    pos, box = liquidish
    oa = knb.pair_observables(pos, box, 3.0)
    ob = knp.pair_observables(pos, box, 3.0)
    for x, y in zip(oa[:4], ob[:4]):
        assert x == pytest.approx(y, rel=1e-11)
    assert np.allclose(oa[4], ob[4], rtol=1e-10, atol=1e-9)
    assert oa[5] == pytest.approx(ob[5], rel=1e-12)


def test_hessian_cross_backend(liquidish):
    pos, box = liquidish
    rng = np.random.default_rng(6)
    p = rng.standard_normal((4, pos.shape[0], 3))
    a = knb.hessian_quadratic_form(pos, box, 3.0, p)
    b = knp.hessian_quadratic_form(pos, box, 3.0, p)
    assert np.allclose(a, b, rtol=1e-11)


def test_sample_config_cross_backend(liquidish):
    pos, box = liquidish
    rng = np.random.default_rng(7)
    p = rng.standard_normal((3, pos.shape[0], 3))
    sa = knb.sample_config(pos, box, 3.0, p, 3.0, 150)
    sb = knp.sample_config(pos, box, 3.0, p, 3.0, 150)
    for x, y in zip(sa[:4], sb[:4]):
        assert x == pytest.approx(y, rel=1e-11)
    assert np.allclose(sa[6], sb[6], rtol=1e-11)
    assert np.array_equal(sa[7], sb[7])


def test_histogram_cross_backend(liquidish):
    pos, box = liquidish
    a = knb.pair_distance_histogram(pos, box, 3.0, 150)
    b = knp.pair_distance_histogram(pos, box, 3.0, 150)
    assert np.array_equal(a, b)


def test_metropolis_cross_backend_short(liquidish):
    pos, box = liquidish
    rng = np.random.default_rng(8)
    n_moves = 2 * pos.shape[0]
    disp = rng.uniform(-1, 1, (n_moves, 3))
    uacc = rng.uniform(0, 1, n_moves)
    pa, pb = pos.copy(), pos.copy()
    ca = knb.build_pair_energy_cache(pa, box, 3.0)
    cb = knp.build_pair_energy_cache(pb, box, 3.0)
    na, dua = knb.metropolis_sweeps(pa, ca, box, 3.0, 1.0 / 1.5, 0.15, disp, uacc)
    nb, dub = knp.metropolis_sweeps(pb, cb, box, 3.0, 1.0 / 1.5, 0.15, disp, uacc)
    assert na == nb
    assert dua == pytest.approx(dub, rel=1e-9)
    assert np.allclose(pa, pb, atol=1e-12)


def test_cache_stays_consistent(liquidish):
    pos, box = liquidish
    rng = np.random.default_rng(9)
    p = pos.copy()
    cache = knb.build_pair_energy_cache(p, box, 3.0)
    for _ in range(5):
        disp = rng.uniform(-1, 1, (pos.shape[0], 3))
        uacc = rng.uniform(0, 1, pos.shape[0])
        knb.metropolis_sweeps(p, cache, box, 3.0, 1.0, 0.15, disp, uacc)
    rebuilt = knb.build_pair_energy_cache(p, box, 3.0)
    assert np.max(np.abs(rebuilt - cache)) < 1e-12


def _two_particle_box(r, box=50.0):
    pos = np.zeros((2, 3))
    pos[1, 0] = r
    return np.ascontiguousarray(pos), box


def test_two_particles_at_minimum():
    r_min = 2.0 ** (1.0 / 6.0)
    pos, box = _two_particle_box(r_min)
    u, virial, lap, gradsq, forces, min_dist = kernels.pair_observables(pos, box, 10.0)
    assert u == pytest.approx(-1.0, rel=1e-12)
    assert virial == pytest.approx(0.0, abs=1e-12)  # force-free separation
    assert gradsq == pytest.approx(0.0, abs=1e-24)
    assert min_dist == pytest.approx(r_min)


def test_two_particles_gradsq_identity():
    r = 1.4
    pos, box = _two_particle_box(r)
    _, _, _, gradsq, forces, _ = kernels.pair_observables(pos, box, 10.0)
    assert gradsq == pytest.approx(2.0 * lj_du(r) ** 2, rel=1e-12)
    assert np.allclose(forces[0], -forces[1])


def test_two_particle_hessian_eigenmodes():
    """Pair along x: transverse relative momentum picks the u'/q eigenvalue,
    longitudinal picks u''."""
    r = 1.3
    pos, box = _two_particle_box(r)
    p = np.zeros((2, 2, 3))
    p[0, 0, 1] = 1.0  # relative momentum along y (transverse)
    p[1, 0, 0] = 1.0  # relative momentum along x (longitudinal)
    out = kernels.hessian_quadratic_form(pos, box, 10.0, p)
    assert out[0] == pytest.approx(lj_du(r) / r, rel=1e-12)
    assert out[1] == pytest.approx(lj_d2u(r), rel=1e-12)


@pytest.fixture(scope="module")
def small_random():
    rng = np.random.default_rng(12)
    config = fcc_lattice(30, 0.4)
    pos = (config.positions + rng.normal(0.0, 0.05, (30, 3))) % config.box_length
    return np.ascontiguousarray(pos), config.box_length


def _total_u(pos, box, rcut):
    return kernels.total_potential(np.ascontiguousarray(pos), box, rcut)


def test_forces_match_finite_differences(small_random):
    pos, box = small_random
    rcut = box / 2.0 * 0.99
    _, _, _, _, forces, _ = kernels.pair_observables(pos, box, rcut)
    h = 1e-6
    rng = np.random.default_rng(3)
    for idx in rng.choice(pos.shape[0], 4, replace=False):
        for ax in range(3):
            pp = pos.copy()
            pp[idx, ax] += h
            um = pos.copy()
            um[idx, ax] -= h
            grad_fd = (_total_u(pp, box, rcut) - _total_u(um, box, rcut)) / (2 * h)
            assert -grad_fd == pytest.approx(forces[idx, ax], rel=1e-6, abs=1e-8)


def test_gradsq_matches_finite_differences(small_random):
    pos, box = small_random
    rcut = box / 2.0 * 0.99
    _, _, _, gradsq, _, _ = kernels.pair_observables(pos, box, rcut)
    h = 1e-6
    total = 0.0
    for idx in range(pos.shape[0]):
        for ax in range(3):
            pp = pos.copy()
            pp[idx, ax] += h
            um = pos.copy()
            um[idx, ax] -= h
            total += ((_total_u(pp, box, rcut) - _total_u(um, box, rcut)) / (2 * h)) ** 2
    assert gradsq == pytest.approx(total, rel=1e-6)


def test_laplacian_matches_finite_differences(small_random):
    pos, box = small_random
    rcut = box / 2.0 * 0.99
    _, _, lap, _, _, _ = kernels.pair_observables(pos, box, rcut)
    h = 1e-4
    u0 = _total_u(pos, box, rcut)
    total = 0.0
    for idx in range(pos.shape[0]):
        for ax in range(3):
            pp = pos.copy()
            pp[idx, ax] += h
            um = pos.copy()
            um[idx, ax] -= h
            total += (_total_u(pp, box, rcut) - 2 * u0 + _total_u(um, box, rcut)) / h**2
    assert lap == pytest.approx(total, rel=1e-4)


def test_hessian_contraction_matches_finite_differences(small_random):
    pos, box = small_random
    rcut = box / 2.0 * 0.99
    rng = np.random.default_rng(4)
    p = rng.standard_normal((1, pos.shape[0], 3))
    got = kernels.hessian_quadratic_form(pos, box, rcut, p)[0]
    # pp : grad grad U = d^2/dt^2 U(pos + t p) at t = 0
    h = 1e-5
    u0 = _total_u(pos, box, rcut)
    up = _total_u(pos + h * p[0], box, rcut)
    um = _total_u(pos - h * p[0], box, rcut)
    fd = (up - 2 * u0 + um) / h**2
    assert got == pytest.approx(fd, rel=1e-4)
