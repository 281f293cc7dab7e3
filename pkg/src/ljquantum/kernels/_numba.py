"""Numba-compiled pair kernels; semantics identical to the numpy backend.

fastmath stays off so results are bit-reproducible across runs of the
same build; cache=True amortizes compilation across processes.

The Metropolis walker keeps an N x N matrix of current pair energies so a
trial move costs one distance evaluation per partner instead of two; the
cache always holds freshly computed values (never increments), so it
cannot drift.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _mi(d: float, box: float, ibox: float) -> float:
    return d - box * math.floor(d * ibox + 0.5)


@njit(cache=True)
def total_potential(pos: np.ndarray, box: float, rcut: float) -> float:
    n = pos.shape[0]
    ibox = 1.0 / box
    rc2 = rcut * rcut
    u = 0.0
    for i in range(n - 1):
        xi = pos[i, 0]
        yi = pos[i, 1]
        zi = pos[i, 2]
        for j in range(i + 1, n):
            dx = _mi(xi - pos[j, 0], box, ibox)
            dy = _mi(yi - pos[j, 1], box, ibox)
            dz = _mi(zi - pos[j, 2], box, ibox)
            r2 = dx * dx + dy * dy + dz * dz
            if r2 < rc2:
                sr6 = 1.0 / (r2 * r2 * r2)
                u += 4.0 * (sr6 * sr6 - sr6)
    return u


@njit(cache=True)
def pair_observables(pos: np.ndarray, box: float, rcut: float):
    """(u, virial, laplacian, gradsq, forces, min_dist) for one configuration."""
    n = pos.shape[0]
    ibox = 1.0 / box
    rc2 = rcut * rcut
    u = 0.0
    virial = 0.0
    laplacian = 0.0
    min_r2 = 1.0e300
    forces = np.zeros((n, 3))
    for i in range(n - 1):
        xi = pos[i, 0]
        yi = pos[i, 1]
        zi = pos[i, 2]
        for j in range(i + 1, n):
            dx = _mi(xi - pos[j, 0], box, ibox)
            dy = _mi(yi - pos[j, 1], box, ibox)
            dz = _mi(zi - pos[j, 2], box, ibox)
            r2 = dx * dx + dy * dy + dz * dz
            if r2 < min_r2:
                min_r2 = r2
            if r2 < rc2:
                r = math.sqrt(r2)
                sr6 = 1.0 / (r2 * r2 * r2)
                sr12 = sr6 * sr6
                u += 4.0 * (sr12 - sr6)
                du = (4.0 / r) * (-12.0 * sr12 + 6.0 * sr6)
                d2u = (4.0 / r2) * (156.0 * sr12 - 42.0 * sr6)
                virial += r * du
                laplacian += 2.0 * (d2u + 2.0 * du / r)
                s = -du / r
                fx = s * dx
                fy = s * dy
                fz = s * dz
                forces[i, 0] += fx
                forces[i, 1] += fy
                forces[i, 2] += fz
                forces[j, 0] -= fx
                forces[j, 1] -= fy
                forces[j, 2] -= fz
    gradsq = 0.0
    for i in range(n):
        gradsq += (
            forces[i, 0] * forces[i, 0]
            + forces[i, 1] * forces[i, 1]
            + forces[i, 2] * forces[i, 2]
        )
    return u, virial, laplacian, gradsq, forces, math.sqrt(min_r2)


@njit(cache=True)
def hessian_quadratic_form(
    pos: np.ndarray, box: float, rcut: float, pvecs: np.ndarray
) -> np.ndarray:
    """sum_{j<k} (p_j - p_k) . H_jk . (p_j - p_k) per momentum set."""
    n = pos.shape[0]
    n_m = pvecs.shape[0]
    ibox = 1.0 / box
    rc2 = rcut * rcut
    out = np.zeros(n_m)
    for i in range(n - 1):
        xi = pos[i, 0]
        yi = pos[i, 1]
        zi = pos[i, 2]
        for j in range(i + 1, n):
            dx = _mi(xi - pos[j, 0], box, ibox)
            dy = _mi(yi - pos[j, 1], box, ibox)
            dz = _mi(zi - pos[j, 2], box, ibox)
            r2 = dx * dx + dy * dy + dz * dz
            if r2 < rc2:
                r = math.sqrt(r2)
                sr6 = 1.0 / (r2 * r2 * r2)
                sr12 = sr6 * sr6
                du = (4.0 / r) * (-12.0 * sr12 + 6.0 * sr6)
                d2u = (4.0 / r2) * (156.0 * sr12 - 42.0 * sr6)
                du_r = du / r
                qx = dx / r
                qy = dy / r
                qz = dz / r
                for m in range(n_m):
                    px = pvecs[m, i, 0] - pvecs[m, j, 0]
                    py = pvecs[m, i, 1] - pvecs[m, j, 1]
                    pz = pvecs[m, i, 2] - pvecs[m, j, 2]
                    longi = px * qx + py * qy + pz * qz
                    dp2 = px * px + py * py + pz * pz
                    out[m] += d2u * longi * longi + du_r * (dp2 - longi * longi)
    return out


@njit(cache=True)
def sample_config(
    pos: np.ndarray,
    box: float,
    rcut: float,
    pvecs: np.ndarray,
    hist_rmax: float,
    hist_nbins: int,
):
    """One fused production-sampling pass over all pairs.

    Returns (u, virial, laplacian, gradsq, forces, min_dist, pp_hessian_pp
    per momentum set, pair-distance histogram counts).
    """
    n = pos.shape[0]
    n_m = pvecs.shape[0]
    ibox = 1.0 / box
    rc2 = rcut * rcut
    hscale = hist_nbins / hist_rmax
    u = 0.0
    virial = 0.0
    laplacian = 0.0
    min_r2 = 1.0e300
    forces = np.zeros((n, 3))
    pphpp = np.zeros(n_m)
    counts = np.zeros(hist_nbins, dtype=np.int64)
    for i in range(n - 1):
        xi = pos[i, 0]
        yi = pos[i, 1]
        zi = pos[i, 2]
        for j in range(i + 1, n):
            dx = _mi(xi - pos[j, 0], box, ibox)
            dy = _mi(yi - pos[j, 1], box, ibox)
            dz = _mi(zi - pos[j, 2], box, ibox)
            r2 = dx * dx + dy * dy + dz * dz
            if r2 < min_r2:
                min_r2 = r2
            if r2 < rc2:
                r = math.sqrt(r2)
                b = int(r * hscale)
                if b < hist_nbins:
                    counts[b] += 1
                sr6 = 1.0 / (r2 * r2 * r2)
                sr12 = sr6 * sr6
                u += 4.0 * (sr12 - sr6)
                du = (4.0 / r) * (-12.0 * sr12 + 6.0 * sr6)
                d2u = (4.0 / r2) * (156.0 * sr12 - 42.0 * sr6)
                virial += r * du
                laplacian += 2.0 * (d2u + 2.0 * du / r)
                s = -du / r
                forces[i, 0] += s * dx
                forces[i, 1] += s * dy
                forces[i, 2] += s * dz
                forces[j, 0] -= s * dx
                forces[j, 1] -= s * dy
                forces[j, 2] -= s * dz
                du_r = du / r
                qx = dx / r
                qy = dy / r
                qz = dz / r
                for m in range(n_m):
                    px = pvecs[m, i, 0] - pvecs[m, j, 0]
                    py = pvecs[m, i, 1] - pvecs[m, j, 1]
                    pz = pvecs[m, i, 2] - pvecs[m, j, 2]
                    longi = px * qx + py * qy + pz * qz
                    dp2 = px * px + py * py + pz * pz
                    pphpp[m] += d2u * longi * longi + du_r * (dp2 - longi * longi)
    gradsq = 0.0
    for i in range(n):
        gradsq += (
            forces[i, 0] * forces[i, 0]
            + forces[i, 1] * forces[i, 1]
            + forces[i, 2] * forces[i, 2]
        )
    return u, virial, laplacian, gradsq, forces, math.sqrt(min_r2), pphpp, counts


@njit(cache=True)
def build_pair_energy_cache(pos: np.ndarray, box: float, rcut: float) -> np.ndarray:
    """N x N matrix of current pair energies (0 beyond the cutoff and on the diagonal)."""
    n = pos.shape[0]
    ibox = 1.0 / box
    rc2 = rcut * rcut
    cache = np.zeros((n, n))
    for i in range(n - 1):
        xi = pos[i, 0]
        yi = pos[i, 1]
        zi = pos[i, 2]
        for j in range(i + 1, n):
            dx = _mi(xi - pos[j, 0], box, ibox)
            dy = _mi(yi - pos[j, 1], box, ibox)
            dz = _mi(zi - pos[j, 2], box, ibox)
            r2 = dx * dx + dy * dy + dz * dz
            if r2 < rc2:
                sr6 = 1.0 / (r2 * r2 * r2)
                uij = 4.0 * (sr6 * sr6 - sr6)
                cache[i, j] = uij
                cache[j, i] = uij
    return cache


@njit(cache=True)
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

    Move m displaces particle m % N by max_disp * disp[m] (disp uniform in
    [-1, 1)); acceptance compares uacc[m] against exp(-beta dU).  Returns
    (n_accepted, sum of accepted dU).
    """
    n = pos.shape[0]
    ibox = 1.0 / box
    rc2 = rcut * rcut
    n_acc = 0
    du_total = 0.0
    unew = np.empty(n)
    for m in range(disp.shape[0]):
        i = m % n
        tx = pos[i, 0] + max_disp * disp[m, 0]
        ty = pos[i, 1] + max_disp * disp[m, 1]
        tz = pos[i, 2] + max_disp * disp[m, 2]
        du = 0.0
        for j in range(n):
            if j == i:
                unew[j] = 0.0
                continue
            dx = _mi(tx - pos[j, 0], box, ibox)
            dy = _mi(ty - pos[j, 1], box, ibox)
            dz = _mi(tz - pos[j, 2], box, ibox)
            r2 = dx * dx + dy * dy + dz * dz
            if r2 < rc2:
                sr6 = 1.0 / (r2 * r2 * r2)
                uij = 4.0 * (sr6 * sr6 - sr6)
            else:
                uij = 0.0
            unew[j] = uij
            du += uij - cache[i, j]
        if du <= 0.0 or (-beta * du > -700.0 and uacc[m] < math.exp(-beta * du)):
            pos[i, 0] = tx - box * math.floor(tx * ibox)
            pos[i, 1] = ty - box * math.floor(ty * ibox)
            pos[i, 2] = tz - box * math.floor(tz * ibox)
            for j in range(n):
                cache[i, j] = unew[j]
                cache[j, i] = unew[j]
            n_acc += 1
            du_total += du
    return n_acc, du_total


@njit(cache=True)
def pair_distance_histogram(
    pos: np.ndarray, box: float, r_max: float, nbins: int
) -> np.ndarray:
    """Counts of pair distances below r_max in nbins uniform bins."""
    n = pos.shape[0]
    ibox = 1.0 / box
    counts = np.zeros(nbins, dtype=np.int64)
    scale = nbins / r_max
    for i in range(n - 1):
        xi = pos[i, 0]
        yi = pos[i, 1]
        zi = pos[i, 2]
        for j in range(i + 1, n):
            dx = _mi(xi - pos[j, 0], box, ibox)
            dy = _mi(yi - pos[j, 1], box, ibox)
            dz = _mi(zi - pos[j, 2], box, ibox)
            r = math.sqrt(dx * dx + dy * dy + dz * dz)
            if r < r_max:
                b = int(r * scale)
                if b < nbins:
                    counts[b] += 1
    return counts
