"""Analytic quantum ideal-gas loop series and its brute-force quadrature oracle.

The l-particle exchange loop contributes (+-1)^(l-1) z^l / l^(5/2) to
beta p Lambda^3.  The quadrature oracle re-derives the l^(-5/2) weight by
integrating the 3(l-1)-dimensional Gaussian loop kernel numerically, one
Cartesian direction at a time, and is the package's independent check on
the tridiagonal quadratic form and its determinant.
"""

from __future__ import annotations

import warnings

import numpy as np

from .units_species import Statistics


def ideal_loop_coeff(l: int, statistics: Statistics) -> float:
    """Coefficient of z^l in beta p Lambda^3: (+-1)^(l-1) l^(-5/2)."""
    if l < 1:
        raise ValueError(f"loop order must be >= 1, got {l}")
    return float(statistics.sign ** (l - 1)) * l ** (-2.5)


def ideal_pressure_series(z: float, l_max: int, statistics: Statistics) -> float:
    """Partial sum of beta p Lambda^3 = sum_l (+-1)^(l-1) z^l l^(-5/2).

    For bosons the series diverges at z >= 1; the partial sum is still
    returned but a RuntimeWarning flags the divergence.
    """
    if l_max < 1:
        raise ValueError(f"l_max must be >= 1, got {l_max}")
    if z < 0:
        raise ValueError(f"z must be >= 0, got {z}")
    if statistics is Statistics.BOSON and z >= 1.0:
        warnings.warn(
            f"boson fugacity series diverges for z >= 1 (got z = {z}); "
            "partial sum returned",
            RuntimeWarning,
            stacklevel=2,
        )
    orders = np.arange(1, l_max + 1)
    signs = float(statistics.sign) ** (orders - 1)
    return float(np.sum(signs * z**orders * orders**-2.5))


def tridiag_det(n: int) -> int:
    """Determinant of the n x n tridiagonal matrix with 2 on, -1 off the diagonal.

    Three-term recurrence D_n = 2 D_{n-1} - D_{n-2} gives n + 1 exactly.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    d_prev, d = 1, 2  # D_0 = 1 by convention, D_1 = 2
    for _ in range(n - 1):
        d_prev, d = d, 2 * d - d_prev
    return d


def tridiag_matrix(n: int) -> np.ndarray:
    """The explicit matrix behind tridiag_det, for direct cross-checks."""
    a = 2.0 * np.eye(n)
    off = -np.ones(n - 1)
    a += np.diag(off, 1) + np.diag(off, -1)
    return a


def ideal_loop_quadrature(l: int, lam: float, n_nodes: int = 64) -> float:
    """|loop coefficient| for l in {2, 3, 4} by brute-force Gaussian quadrature.

    Evaluates Int dq^(l-1) exp(-pi A q.q / Lambda^2) per Cartesian
    direction with Gauss-Legendre nodes, cubes it (three directions), and
    divides by l Lambda^(3(l-1)).  Lambda cancels identically.
    """
    if l not in (2, 3, 4):
        raise ValueError(f"unsupported loop order {l}; quadrature covers l in {{2, 3, 4}}")
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    dim = l - 1
    a = tridiag_matrix(dim)
    half_width = 4.5 * lam
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    nodes = nodes * half_width
    weights = weights * half_width

    grids = np.meshgrid(*([nodes] * dim), indexing="ij")
    q = np.stack([g.ravel() for g in grids], axis=-1)  # (n^dim, dim)
    quad_form = np.einsum("ni,ij,nj->n", q, a, q)
    values = np.exp(-np.pi * quad_form / (lam * lam))
    w = np.ones(values.shape[0])
    for axis_w in np.meshgrid(*([weights] * dim), indexing="ij"):
        w *= axis_w.ravel()
    integral_one_direction = float(np.sum(w * values))
    return integral_one_direction**3 / (l * lam ** (3 * dim))
