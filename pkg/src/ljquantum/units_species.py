"""Physical constants, species database, and reduced-unit conversions.

All downstream physics runs in reduced Lennard-Jones units; this module is
the single place where SI constants enter.  The thermal de Broglie
wavelength Lambda = h / sqrt(2 pi m k_B T) is the only quantum input the
correction quadratures need, always reported as the dimensionless ratio
Lambda/sigma.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

# CODATA 2018 (SI exact where so defined).  All conversions route through
# this table; the Lambda/sigma targets are sensitive at the third digit.
PLANCK_H = 6.62607015e-34        # J s (exact)
HBAR = 1.054571817e-34           # J s
BOLTZMANN_KB = 1.380649e-23      # J / K (exact)
ATOMIC_MASS_KG = 1.66053906660e-27  # kg / amu
NANOMETRE = 1.0e-9               # m


class Statistics(enum.Enum):
    """Exchange statistics; fixes the sign of odd-parity loop corrections."""

    BOSON = "boson"
    FERMION = "fermion"

    @property
    def sign(self) -> int:
        return +1 if self is Statistics.BOSON else -1


class SpeciesError(LookupError):
    """Unknown species name."""


@dataclass(frozen=True)
class SpeciesParams:
    """Lennard-Jones species: mass [amu], well depth [K], core size [nm]."""

    name: str
    mass: float
    eps_over_kB: float
    sigma: float
    statistics: Statistics = Statistics.BOSON

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if self.eps_over_kB <= 0:
            raise ValueError(f"eps_over_kB must be positive, got {self.eps_over_kB}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class StatePoint:
    """Reduced state point: t_reduced = k_B T / eps, rho_reduced = rho sigma^3."""

    t_reduced: float
    rho_reduced: float

    def __post_init__(self):
        if self.t_reduced <= 0:
            raise ValueError(f"t_reduced must be positive, got {self.t_reduced}")
        if self.rho_reduced < 0:
            raise ValueError(f"rho_reduced must be >= 0, got {self.rho_reduced}")

    @property
    def beta(self) -> float:
        """Inverse temperature in units of 1/eps."""
        return 1.0 / self.t_reduced


@dataclass(frozen=True)
class DerivedScales:
    """Dimensionless scales derivable from species + state alone."""

    lambda_over_sigma: float
    beta_eps: float


# Helium and argon parameters are the standard cryogenic-fluid LJ fits.
# Neon is NOT pinned by the validation targets shipped with this package;
# the values below are the common literature default (m = 20.180 amu,
# eps/kB = 36.68 K, sigma = 0.2782 nm) and can be overridden through the
# CLI config file, so neon benchmark rows are reproducible only up to that
# parameter choice.
_BUILTINS = {
    "helium": SpeciesParams("helium", 4.003, 10.22, 0.2556),
    "argon": SpeciesParams("argon", 39.948, 124.0, 0.3418),
    "neon": SpeciesParams("neon", 20.180, 36.68, 0.2782),
}


def builtin_species(name: str) -> SpeciesParams:
    """Look up a built-in species by (case-insensitive) name."""
    try:
        return _BUILTINS[name.strip().lower()]
    except KeyError:
        known = ", ".join(sorted(_BUILTINS))
        raise SpeciesError(f"unknown species {name!r}; known species: {known}") from None


def temperature_kelvin(species: SpeciesParams, state: StatePoint) -> float:
    """Absolute temperature of a reduced state point."""
    return state.t_reduced * species.eps_over_kB


def t_reduced_from_kelvin(species: SpeciesParams, t_kelvin: float) -> float:
    """Reduced temperature k_B T / eps from an absolute temperature."""
    if t_kelvin <= 0:
        raise ValueError(f"temperature must be positive, got {t_kelvin} K")
    return t_kelvin / species.eps_over_kB


def density_per_nm3(species: SpeciesParams, state: StatePoint) -> float:
    """Number density in nm^-3 for a reduced state point."""
    return state.rho_reduced / species.sigma**3


def rho_reduced_from_density(species: SpeciesParams, rho_nm3: float) -> float:
    """Reduced density rho sigma^3 from a number density in nm^-3."""
    if rho_nm3 < 0:
        raise ValueError(f"density must be >= 0, got {rho_nm3}")
    return rho_nm3 * species.sigma**3


def thermal_wavelength(species: SpeciesParams, state: StatePoint) -> float:
    """Thermal de Broglie wavelength over sigma.

    Lambda = h / sqrt(2 pi m k_B T) with T = t_reduced * eps_over_kB.
    """
    t_kelvin = temperature_kelvin(species, state)
    if t_kelvin <= 0:
        raise ValueError(f"temperature must be positive, got {t_kelvin} K")
    mass_kg = species.mass * ATOMIC_MASS_KG
    lam = PLANCK_H / math.sqrt(2.0 * math.pi * mass_kg * BOLTZMANN_KB * t_kelvin)
    return lam / (species.sigma * NANOMETRE)


def derived_scales(species: SpeciesParams, state: StatePoint) -> DerivedScales:
    return DerivedScales(
        lambda_over_sigma=thermal_wavelength(species, state),
        beta_eps=state.beta,
    )


def hbar_sq_over_m(species: SpeciesParams, state: StatePoint) -> float:
    """hbar^2 / m in reduced units (eps sigma^2), via Lambda^2 = 2 pi beta hbar^2 / m."""
    lam = thermal_wavelength(species, state)
    return lam * lam * state.t_reduced / (2.0 * math.pi)
