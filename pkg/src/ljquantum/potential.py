"""Lennard-Jones pair potential, radial derivatives, and analytic tails.

Reduced units throughout: eps = sigma = 1 unless passed explicitly.  The
integral-equation path evaluates the full potential out to the grid edge;
only the Monte Carlo engine truncates at r_cut, re-adding the analytic
tail integrals collected here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _check_positive_r(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise ValueError("pair separation must be positive")
    return r


def lj_u(r, eps: float = 1.0, sigma: float = 1.0):
    """u(r) = 4 eps [ (sigma/r)^12 - (sigma/r)^6 ]."""
    r = _check_positive_r(r)
    sr6 = (sigma / r) ** 6
    out = 4.0 * eps * (sr6 * sr6 - sr6)
    return out if out.ndim else float(out)


def lj_du(r, eps: float = 1.0, sigma: float = 1.0):
    """du/dr = 4 eps [ -12 sigma^12/r^13 + 6 sigma^6/r^7 ]."""
    r = _check_positive_r(r)
    sr6 = (sigma / r) ** 6
    out = (4.0 * eps / r) * (-12.0 * sr6 * sr6 + 6.0 * sr6)
    return out if out.ndim else float(out)


def lj_d2u(r, eps: float = 1.0, sigma: float = 1.0):
    """d2u/dr2 = 4 eps [ 156 sigma^12/r^14 - 42 sigma^6/r^8 ]."""
    r = _check_positive_r(r)
    sr6 = (sigma / r) ** 6
    out = (4.0 * eps / (r * r)) * (156.0 * sr6 * sr6 - 42.0 * sr6)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PairPotential:
    """LJ potential with an optional cutoff (r_cut = inf for continuum use)."""

    eps: float = 1.0
    sigma: float = 1.0
    r_cut: float = math.inf

    def __post_init__(self):
        if math.isfinite(self.r_cut) and self.r_cut <= self.sigma:
            raise ValueError(f"r_cut must exceed sigma, got {self.r_cut}")

    def u(self, r):
        return lj_u(r, self.eps, self.sigma)

    def du(self, r):
        return lj_du(r, self.eps, self.sigma)

    def d2u(self, r):
        return lj_d2u(r, self.eps, self.sigma)


def laplacian_tail(rho: float, r_cut: float, prefactor: float) -> float:
    """Beyond-cutoff piece of the Laplacian-based quantum correction density.

    Returns the contribution to the dimensionless correction per volume from
    the attractive branch u_tail = -4 eps sigma^6 / q^6 integrated past r_cut:

        prefactor * 4 pi rho^2 * 4 eps * 6 sigma^6 / r_cut^5

    with ``prefactor`` the dimensionless hbar^2 beta^2 / (24 m) group in
    reduced units.  Equals -prefactor times the analytic integral
    4 pi rho^2 * Int_{r_cut}^inf q^2 [u_tail'' + 2 u_tail'/q] dq.
    """
    if r_cut < 2.5:
        raise ValueError(f"r_cut must be >= 2.5 sigma for the tail form, got {r_cut}")
    return prefactor * 4.0 * math.pi * rho * rho * 24.0 / r_cut**5


def laplacian_tail_per_config(n_particles: int, rho: float, r_cut: float) -> float:
    """Additive tail for the pair sum sum_{j!=k} [u'' + 2u'/q] of one configuration.

    Int_{r_cut}^inf 4 pi q^2 [u_tail'' + 2 u_tail'/q] dq = -96 pi / r_cut^5
    per particle pair density, i.e. N * rho * (-96 pi / r_cut^5) in total.
    """
    return -96.0 * math.pi * n_particles * rho / r_cut**5


def energy_tail_per_config(n_particles: int, rho: float, r_cut: float) -> float:
    """Standard LJ energy tail: (N rho / 2) Int_{r_cut}^inf 4 pi q^2 u(q) dq."""
    rc3 = r_cut**3
    return 2.0 * math.pi * n_particles * rho * (4.0 / (9.0 * rc3**3) - 4.0 / (3.0 * rc3))


def virial_tail_per_config(n_particles: int, rho: float, r_cut: float) -> float:
    """Tail of the pair virial sum_{j<k} q u'(q) beyond r_cut."""
    rc3 = r_cut**3
    return 2.0 * math.pi * n_particles * rho * (-16.0 / (3.0 * rc3**3) + 8.0 / rc3)
