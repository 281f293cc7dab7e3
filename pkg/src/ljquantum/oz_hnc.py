"""Ornstein-Zernike + hypernetted-chain solver on a uniform radial grid.

The OZ relation is closed with c = exp(-beta u + gamma) - 1 - gamma and
iterated with fixed-mixing Picard steps; the convolution is evaluated in
k-space through fast Fourier sine transforms.  Grid convention:
r_j = (j+1) dr, k_j = (j+1) dk, dk = pi / (n dr), which makes the radial
transform an orthogonal DST-I on the first n-1 points (the last point of
either grid has an identically vanishing kernel).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.fft import dst

from .potential import lj_u, lj_du
from .units_species import StatePoint


class ConvergenceError(RuntimeError):
    """Picard iteration exhausted max_iter; carries the last residual.

    Near a spinodal this is data (the branch endpoint), not a bug.
    """

    def __init__(self, message: str, residual: float, n_iter: int):
        super().__init__(message)
        self.residual = residual
        self.n_iter = n_iter


class StabilityError(RuntimeError):
    """1 - rho c_hat(k) lost positivity; no stable fluid solution."""


@dataclass(frozen=True)
class RadialGrid:
    """Uniform radial grid; n_points a power of two for cheap transforms."""

    n_points: int = 4096
    dr: float = 0.01

    def __post_init__(self):
        if self.n_points < 2048:
            raise ValueError("n_points must be >= 2048")
        if self.n_points & (self.n_points - 1):
            raise ValueError("n_points must be a power of two")
        if self.dr > 0.02:
            raise ValueError("dr must be <= 0.02 sigma")
        if self.n_points * self.dr < 20.0:
            raise ValueError("grid must extend to at least 20 sigma")

    @property
    def r(self) -> np.ndarray:
        return (np.arange(self.n_points) + 1.0) * self.dr

    @property
    def dk(self) -> float:
        return math.pi / (self.n_points * self.dr)

    @property
    def k(self) -> np.ndarray:
        return (np.arange(self.n_points) + 1.0) * self.dk

    @property
    def r_max(self) -> float:
        return self.n_points * self.dr


@dataclass
class PairFunctions:
    """Converged pair structure on a grid: g, h = g-1, c, gamma = h-c."""

    grid: RadialGrid
    g: np.ndarray
    h: np.ndarray
    c: np.ndarray
    gamma: np.ndarray
    n_iterations: int = 0
    residual: float = 0.0


@dataclass
class SolverOptions:
    mixing: float = 0.2
    tol: float = 1.0e-8
    max_iter: int = 50000
    rho_ramp: list[float] | None = None

    def __post_init__(self):
        if not 0.0 < self.mixing <= 1.0:
            raise ValueError("mixing must be in (0, 1]")
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")


def fourier_bessel_forward(f: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """3-D radial Fourier transform f_hat(k) = (4 pi / k) Int r f(r) sin(kr) dr."""
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.n_points,):
        raise ValueError(f"expected {grid.n_points} samples, got {f.shape}")
    n = grid.n_points
    out = np.empty(n)
    # scipy's DST-I carries a factor 2 relative to the plain sine sum.
    out[: n - 1] = (2.0 * math.pi * grid.dr / grid.k[: n - 1]) * dst(
        grid.r[: n - 1] * f[: n - 1], type=1
    )
    out[n - 1] = 0.0
    return out


def fourier_bessel_inverse(f_hat: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """Inverse transform f(r) = (1 / 2 pi^2 r) Int k f_hat(k) sin(kr) dk."""
    f_hat = np.asarray(f_hat, dtype=float)
    if f_hat.shape != (grid.n_points,):
        raise ValueError(f"expected {grid.n_points} samples, got {f_hat.shape}")
    n = grid.n_points
    out = np.empty(n)
    out[: n - 1] = (grid.dk / (4.0 * math.pi**2 * grid.r[: n - 1])) * dst(
        grid.k[: n - 1] * f_hat[: n - 1], type=1
    )
    out[n - 1] = 0.0
    return out


def _oz_gamma(c: np.ndarray, rho: float, grid: RadialGrid) -> np.ndarray:
    """gamma from c via the OZ relation gamma_hat = rho c_hat^2 / (1 - rho c_hat)."""
    c_hat = fourier_bessel_forward(c, grid)
    denom = 1.0 - rho * c_hat
    if np.any(denom <= 0.0):
        raise StabilityError(
            f"1 - rho c_hat(k) <= 0 (min {denom.min():.3e}); "
            "no stable fluid solution at this state point"
        )
    gamma_hat = rho * c_hat * c_hat / denom
    return fourier_bessel_inverse(gamma_hat, grid)


def _solve_single(
    beta_u: np.ndarray,
    rho: float,
    grid: RadialGrid,
    opts: SolverOptions,
    gamma0: np.ndarray,
    tol: float | None = None,
) -> tuple[np.ndarray, int, float]:
    """Picard iteration for gamma at one density, from a warm start.

    A Picard transient can push 1 - rho c_hat through zero even when the
    fixed point itself is stable, so a failed OZ step is retried from the
    last good gamma with a halved step instead of aborting outright.
    """
    gamma = gamma0.copy()
    gamma_good = gamma0.copy()
    mixing = opts.mixing
    streak = 0
    prev_res = math.inf
    tol = tol if tol is not None else opts.tol
    for it in range(1, opts.max_iter + 1):
        # Exponent clipped against transient blow-ups; the fixed point is
        # far below the clip, so the converged solution is unaffected.
        c = np.exp(np.minimum(gamma - beta_u, 200.0)) - 1.0 - gamma
        try:
            gamma_new = _oz_gamma(c, rho, grid)
        except StabilityError:
            if it == 1 or mixing <= 1e-3:
                raise
            mixing *= 0.5
            gamma = gamma_good + mixing * (gamma - gamma_good)
            continue
        res = float(np.max(np.abs(gamma_new - gamma)))
        if not math.isfinite(res):
            raise StabilityError("iteration diverged to non-finite values")
        if res < tol:
            return gamma_new, it, res
        if res > prev_res:
            mixing = max(mixing * 0.5, 0.01)
            streak = 0
        else:
            streak += 1
            if streak >= 20:
                mixing = min(mixing * 1.2, opts.mixing)
                streak = 0
        prev_res = res
        gamma_good = gamma
        gamma = gamma + mixing * (gamma_new - gamma)
    raise ConvergenceError(
        f"HNC not converged after {opts.max_iter} iterations "
        f"(residual {prev_res:.3e}); likely near a spinodal",
        residual=prev_res,
        n_iter=opts.max_iter,
    )


# Warm-start schedule.  The bare Mayer-function start is only inside the
# OZ stability domain at low density, and on sub-critical isotherms the
# density axis crosses the two-phase region, so the default path first
# ramps density at a supercritical temperature and then cools at fixed
# density, staying on a connected solution branch throughout.
_T_SAFE = 1.5
_RHO_STEP = 0.1
_T_STEP = 0.1


def _warm_start_schedule(state: StatePoint) -> list[StatePoint]:
    rho, t = state.rho_reduced, state.t_reduced
    t_start = max(t, _T_SAFE)
    n_rho = max(1, math.ceil(rho / _RHO_STEP))
    points = [StatePoint(t_start, x) for x in np.linspace(rho / n_rho, rho, n_rho)]
    if t < t_start:
        n_t = max(1, math.ceil((t_start - t) / _T_STEP))
        points += [StatePoint(x, rho) for x in np.linspace(t_start, t, n_t + 1)[1:]]
    return points


def solve_hnc(
    state: StatePoint,
    grid: RadialGrid | None = None,
    opts: SolverOptions | None = None,
) -> PairFunctions:
    """Solve OZ + HNC for a reduced LJ state point.

    State points are warm-started along a density ramp (then a temperature
    ramp for cold liquids); an explicit opts.rho_ramp overrides the default
    schedule and is walked at the target temperature.  Raises
    ConvergenceError (carrying the last residual) past the last point of
    convergence, StabilityError if the OZ kernel loses positivity.
    """
    grid = grid or RadialGrid()
    opts = opts or SolverOptions()
    r = grid.r

    if opts.rho_ramp is not None:
        schedule = [StatePoint(state.t_reduced, x) for x in opts.rho_ramp if x > 0.0]
        if not schedule or abs(schedule[-1].rho_reduced - state.rho_reduced) > 1e-12:
            schedule.append(state)
    else:
        schedule = _warm_start_schedule(state)

    gamma = np.zeros(grid.n_points)
    total_iter = 0
    res = 0.0
    prev = StatePoint(schedule[0].t_reduced, 0.0)
    for point in schedule:
        if point.rho_reduced == 0.0:
            continue
        # Walk prev -> point, bisecting the gap when a step lands outside
        # the reachable domain; a step that cannot be refined further is a
        # genuine branch endpoint and the error propagates.
        pending = [point]
        depth = 0
        while pending:
            target = pending[-1]
            beta_u = target.beta * lj_u(r)
            is_final = target is schedule[-1]
            step_tol = opts.tol if is_final else max(opts.tol, 1.0e-6)
            try:
                gamma, n_it, res = _solve_single(
                    beta_u, target.rho_reduced, grid, opts, gamma, tol=step_tol
                )
            except (StabilityError, ConvergenceError):
                if depth >= 6:
                    raise
                depth += 1
                pending.append(
                    StatePoint(
                        0.5 * (prev.t_reduced + target.t_reduced),
                        0.5 * (prev.rho_reduced + target.rho_reduced),
                    )
                )
                continue
            total_iter += n_it
            prev = target
            pending.pop()
        prev = point

    # g from the closure keeps it exactly non-negative; h and c follow.
    beta_u = state.beta * lj_u(r)
    g = np.exp(-beta_u + gamma)
    h = g - 1.0
    c = h - gamma
    return PairFunctions(
        grid=grid, g=g, h=h, c=c, gamma=gamma, n_iterations=total_iter, residual=res
    )


def virial_pressure(pf: PairFunctions, state: StatePoint) -> float:
    """beta p sigma^3 = rho - (2 pi beta rho^2 / 3) Int q^3 u'(q) g(q) dq."""
    r = pf.grid.r
    rho = state.rho_reduced
    integrand = r**3 * lj_du(r) * pf.g
    integral = np.trapezoid(integrand, dx=pf.grid.dr)
    return rho - (2.0 * math.pi * state.beta * rho * rho / 3.0) * integral


def g_lookup(pf: PairFunctions, r) -> np.ndarray | float:
    """Linear interpolation of g(r); 1 beyond r_max.

    Below the first grid point the first nodal value is held, which is
    identically zero for any physical repulsive core (exp(-beta u(dr))
    underflows); synthetic overrides such as g == 1 keep their value.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0):
        raise ValueError("r must be >= 0")
    out = np.interp(r, pf.grid.r, pf.g, left=float(pf.g[0]), right=1.0)
    return out if out.ndim else float(out)


def dump_csv(pf: PairFunctions, path: str) -> None:
    """Write (r, g, h, c) rows with 17-significant-digit floats for regression diffs."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("r,g,h,c\n")
        for r, g, h, c in zip(pf.grid.r, pf.g, pf.h, pf.c):
            fh.write(f"{r:.17g},{g:.17g},{h:.17g},{c:.17g}\n")
