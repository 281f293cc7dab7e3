"""Quantum corrections to the grand potential of a Lennard-Jones fluid.

Everything downstream of the species database works in reduced LJ units
(lengths in sigma, energies in epsilon, k_B = 1).  The quantum scale enters
only through the thermal de Broglie wavelength Lambda/sigma.
"""

from .units_species import (
    SpeciesParams,
    StatePoint,
    DerivedScales,
    Statistics,
    builtin_species,
    thermal_wavelength,
    derived_scales,
)
from .potential import PairPotential, lj_u, lj_du, lj_d2u, laplacian_tail
from .oz_hnc import (
    RadialGrid,
    PairFunctions,
    SolverOptions,
    ConvergenceError,
    StabilityError,
    solve_hnc,
    virial_pressure,
    g_lookup,
)
from .quantum_corrections import (
    CorrectionReport,
    TripletModel,
    TripletQuadSpec,
    mean_laplacian_U,
    mean_gradsq_U,
    omega_1_2,
    omega_2_0,
    omega_2_1,
    omega_3_0,
    hard_core_dimer,
    kinetic_energy_average,
    correction_report,
)
from .ideal_gas import (
    ideal_loop_coeff,
    ideal_pressure_series,
    tridiag_det,
    ideal_loop_quadrature,
)
from .mc_engine import McParams, McEstimate, McResult, run_nvt

__all__ = [
    "SpeciesParams",
    "StatePoint",
    "DerivedScales",
    "Statistics",
    "builtin_species",
    "thermal_wavelength",
    "derived_scales",
    "PairPotential",
    "lj_u",
    "lj_du",
    "lj_d2u",
    "laplacian_tail",
    "RadialGrid",
    "PairFunctions",
    "SolverOptions",
    "ConvergenceError",
    "StabilityError",
    "solve_hnc",
    "virial_pressure",
    "g_lookup",
    "CorrectionReport",
    "TripletModel",
    "TripletQuadSpec",
    "mean_laplacian_U",
    "mean_gradsq_U",
    "omega_1_2",
    "omega_2_0",
    "omega_2_1",
    "omega_3_0",
    "hard_core_dimer",
    "kinetic_energy_average",
    "correction_report",
    "ideal_loop_coeff",
    "ideal_pressure_series",
    "tridiag_det",
    "ideal_loop_quadrature",
    "McParams",
    "McEstimate",
    "McResult",
    "run_nvt",
]

__version__ = "0.1.0"
