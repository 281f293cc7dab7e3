"""Shared fixtures: converged HNC solutions and reference Monte Carlo runs.

Session scope keeps each expensive solve/run to one evaluation for the
whole suite; everything downstream treats them as read-only.
"""

import numpy as np
import pytest

from ljquantum.oz_hnc import RadialGrid, PairFunctions, solve_hnc
from ljquantum.units_species import StatePoint, builtin_species
from ljquantum.mc_engine import McParams, run_nvt


GOLDEN_STATE = StatePoint(1.5, 0.5)
COLD_STATE = StatePoint(0.5, 0.85)
T1_STATE = StatePoint(1.0, 0.7)


@pytest.fixture(scope="session")
def helium():
    return builtin_species("helium")


@pytest.fixture(scope="session")
def argon():
    return builtin_species("argon")


@pytest.fixture(scope="session")
def pf_golden():
    """HNC at T* = 1.5, rho = 0.5 (the benchmark state point)."""
    return solve_hnc(GOLDEN_STATE)


@pytest.fixture(scope="session")
def pf_cold():
    """HNC at T* = 0.5, rho = 0.85 (cold dense liquid, ramped warm start)."""
    return solve_hnc(COLD_STATE)


@pytest.fixture(scope="session")
def pf_t1():
    """HNC at T* = 1.0, rho = 0.7 (liquid branch)."""
    return solve_hnc(T1_STATE)


@pytest.fixture(scope="session")
def pf_ideal():
    """Synthetic pair functions with g == 1 everywhere (ideal-gas override)."""
    grid = RadialGrid()
    ones = np.ones(grid.n_points)
    return PairFunctions(
        grid=grid, g=ones.copy(), h=ones - 1.0, c=ones - 1.0,
        gamma=np.zeros(grid.n_points),
    )


SMOKE_PARAMS = McParams(
    n_particles=500,
    n_blocks=10,
    configs_per_block=50,
    steps_per_atom_between_samples=20,
    n_equil_sweeps=600,
    momentum_samples_per_config=4,
    seed=42,
)


@pytest.fixture(scope="session")
def mc_smoke(helium):
    """Reduced 10 x 50 helium run at the benchmark state (N = 500)."""
    import time

    t0 = time.perf_counter()
    result = run_nvt(SMOKE_PARAMS, helium, GOLDEN_STATE)
    result.elapsed_seconds = time.perf_counter() - t0
    return result
