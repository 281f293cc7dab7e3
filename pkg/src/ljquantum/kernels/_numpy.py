"""Vectorized numpy reference implementations of the pair kernels.

Semantics shared with the numba backend: cubic box of side `box`,
minimum-image convention d - box*floor(d/box + 0.5) (computed with the
precomputed inverse of box, as in the numba path), bare truncated LJ
potential (no shift) with eps = sigma = 1, pairs counted for r < rcut.
The Metropolis walker loops per move with vectorized partner sums; it is
the slow correctness reference, not the production path.
"""

from __future__ import annotations

import numpy as np


def _min_image(d: np.ndarray, box: float) -> np.ndarray:
    ibox = 1.0 / box
    return d - box * np.floor(d * ibox + 0.5)


def _pair_table(pos: np.ndarray, box: float, rcut: float):
    """Within-cutoff pair list: indices, separations, displacement vectors."""
    n = pos.shape[0]
    ii, jj = np.triu_indices(n, 1)
    d = _min_image(pos[ii] - pos[jj], box)
    r2 = np.einsum("ij,ij->i", d, d)
    mask = r2 < rcut * rcut
    r = np.sqrt(r2[mask])
    return ii[mask], jj[mask], r, d[mask], (np.sqrt(r2.min()) if r2.size else np.inf)


def total_potential(pos: np.ndarray, box: float, rcut: float) -> float:
    _, _, r, _, _ = _pair_table(pos, box, rcut)
    sr6 = r**-6
    return float(np.sum(4.0 * (sr6 * sr6 - sr6)))


def _observables_from_table(n, ii, jj, r, d):
    sr6 = r**-6
    u = 4.0 * (sr6 * sr6 - sr6)
    du = (4.0 / r) * (-12.0 * sr6 * sr6 + 6.0 * sr6)
    d2u = (4.0 / (r * r)) * (156.0 * sr6 * sr6 - 42.0 * sr6)
    forces = np.zeros((n, 3))
    fvec = (-du / r)[:, None] * d
    np.add.at(forces, ii, fvec)
    np.add.at(forces, jj, -fvec)
    return u, du, d2u, forces


def pair_observables(pos: np.ndarray, box: float, rcut: float):
    """(u, virial, laplacian, gradsq, forces, min_dist) for one configuration."""
    n = pos.shape[0]
    ii, jj, r, d, min_dist = _pair_table(pos, box, rcut)
    u, du, d2u, forces = _observables_from_table(n, ii, jj, r, d)
    return (
        float(np.sum(u)),
        float(np.sum(r * du)),
        2.0 * float(np.sum(d2u + 2.0 * du / r)),
        float(np.einsum("ij,ij->", forces, forces)),
        forces,
        float(min_dist),
    )


def _hessian_from_table(ii, jj, r, d, du, d2u, pvecs):
    qhat = d / r[:, None]
    out = np.empty(pvecs.shape[0])
    for m in range(pvecs.shape[0]):
        dp = pvecs[m, ii] - pvecs[m, jj]
        longitudinal = np.einsum("ij,ij->i", dp, qhat)
        dp2 = np.einsum("ij,ij->i", dp, dp)
        out[m] = np.sum(d2u * longitudinal**2 + (du / r) * (dp2 - longitudinal**2))
    return out


def hessian_quadratic_form(
    pos: np.ndarray, box: float, rcut: float, pvecs: np.ndarray
) -> np.ndarray:
    """sum_{j<k} (p_j - p_k) . H_jk . (p_j - p_k) per momentum set.

    H_jk = u'' qhat qhat + (u'/q)(I - qhat qhat).
    """
    ii, jj, r, d, _ = _pair_table(pos, box, rcut)
    sr6 = r**-6
    du = (4.0 / r) * (-12.0 * sr6 * sr6 + 6.0 * sr6)
    d2u = (4.0 / (r * r)) * (156.0 * sr6 * sr6 - 42.0 * sr6)
    return _hessian_from_table(ii, jj, r, d, du, d2u, pvecs)


def sample_config(
    pos: np.ndarray,
    box: float,
    rcut: float,
    pvecs: np.ndarray,
    hist_rmax: float,
    hist_nbins: int,
):
    """One fused production-sampling pass; see the numba twin for the contract."""
    n = pos.shape[0]
    ii, jj, r, d, min_dist = _pair_table(pos, box, rcut)
    u, du, d2u, forces = _observables_from_table(n, ii, jj, r, d)
    pphpp = _hessian_from_table(ii, jj, r, d, du, d2u, pvecs)
    counts, _ = np.histogram(r[r < hist_rmax], bins=hist_nbins, range=(0.0, hist_rmax))
    return (
        float(np.sum(u)),
        float(np.sum(r * du)),
        2.0 * float(np.sum(d2u + 2.0 * du / r)),
        float(np.einsum("ij,ij->", forces, forces)),
        forces,
        float(min_dist),
        pphpp,
        counts.astype(np.int64),
    )


def build_pair_energy_cache(pos: np.ndarray, box: float, rcut: float) -> np.ndarray:
    """N x N matrix of current pair energies (0 beyond cutoff and on the diagonal)."""
    n = pos.shape[0]
    d = _min_image(pos[:, None, :] - pos[None, :, :], box)
    r2 = np.einsum("ijk,ijk->ij", d, d)
    np.fill_diagonal(r2, np.inf)
    cache = np.zeros((n, n))
    mask = r2 < rcut * rcut
    sr6 = r2[mask] ** -3
    cache[mask] = 4.0 * (sr6 * sr6 - sr6)
    return cache


def metropolis_sweeps(
    pos: np.ndarray,
    cache: np.ndarray,
    box: float,
    rcut: float,
    beta: float,
    max_disp: float,
    disp: np.ndarray,
    uacc: np.ndarray,
):
    """Sequential single-particle Metropolis moves; pos and cache updated in place.

    Same contract as the numba twin: move m displaces particle m % N by
    max_disp * disp[m]; acceptance compares uacc[m] to exp(-beta dU);
    returns (n_accepted, sum of accepted dU).
    """
    n = pos.shape[0]
    ibox = 1.0 / box
    rc2 = rcut * rcut
    n_acc = 0
    du_total = 0.0
    for m in range(disp.shape[0]):
        i = m % n
        trial = pos[i] + max_disp * disp[m]
        dvec = _min_image(trial[None, :] - pos, box)
        r2 = np.einsum("ij,ij->i", dvec, dvec)
        r2[i] = np.inf
        unew = np.zeros(n)
        mask = r2 < rc2
        sr6 = r2[mask] ** -3
        unew[mask] = 4.0 * (sr6 * sr6 - sr6)
        du = float(np.sum(unew - cache[i]))
        if du <= 0.0 or (-beta * du > -700.0 and uacc[m] < np.exp(-beta * du)):
            pos[i] = trial - box * np.floor(trial * ibox)
            cache[i, :] = unew
            cache[:, i] = unew
            n_acc += 1
            du_total += du
    return n_acc, du_total


def pair_distance_histogram(
    pos: np.ndarray, box: float, r_max: float, nbins: int
) -> np.ndarray:
    """Counts of pair distances below r_max in nbins uniform bins."""
    n = pos.shape[0]
    ii, jj = np.triu_indices(n, 1)
    d = _min_image(pos[ii] - pos[jj], box)
    r = np.sqrt(np.einsum("ij,ij->i", d, d))
    counts, _ = np.histogram(r[r < r_max], bins=nbins, range=(0.0, r_max))
    return counts.astype(np.int64)
