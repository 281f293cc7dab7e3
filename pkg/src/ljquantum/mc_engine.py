"""Canonical (NVT) Metropolis Monte Carlo for the truncated LJ fluid.

Independent cross-check for the integral-equation route: classical
pressure plus the four estimator forms of the leading non-commutativity
correction (two-term gradient form a, Laplacian-only form b, cumulant
form c, direct exponential average form d), with blocked error bars.

Reduced units with the particle mass as the mass unit (m = 1), so momenta
are Gaussian with variance T* per component and the quantum group enters
as hbar^2/m = Lambda^2 T*/(2 pi).  All estimator outputs are densities,
directly comparable to -beta Omega sigma^3 / V.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .potential import (
    energy_tail_per_config,
    laplacian_tail_per_config,
    virial_tail_per_config,
)
from .units_species import SpeciesParams, StatePoint, hbar_sq_over_m

FORM_NAMES = ("a", "b", "c", "d")


class InitializationError(RuntimeError):
    """Lattice start impossible at the requested density."""


class GeometryError(ValueError):
    """Cutoff exceeds half the box."""


class OverlapError(RuntimeError):
    """Unphysical particle overlap encountered during sampling."""


@dataclass(frozen=True)
class McParams:
    n_particles: int
    n_blocks: int = 50
    configs_per_block: int = 100
    steps_per_atom_between_samples: int = 20
    max_displacement: float | None = None  # auto-tuned when None
    r_cut: float = 3.5
    seed: int = 20161010
    momentum_samples_per_config: int = 10
    n_equil_sweeps: int = 2000
    hist_nbins: int = 175
    hist_rmax: float = 3.5

    def __post_init__(self):
        if self.n_particles < 2:
            raise ValueError("need at least 2 particles")
        if self.n_blocks < 2:
            raise ValueError("need at least 2 blocks for error bars")


@dataclass(frozen=True)
class Configuration:
    """Wrapped particle positions in a cubic box of side box_length."""

    positions: np.ndarray
    box_length: float

    @property
    def n_particles(self) -> int:
        return self.positions.shape[0]

    @property
    def density(self) -> float:
        return self.n_particles / self.box_length**3


@dataclass(frozen=True)
class ConfigObservables:
    """Pair sums of one configuration, tails applied where stated.

    potential_energy and virial carry the standard LJ tails; laplacian
    carries the attractive-branch Laplacian tail; gradsq is the bare
    truncated sum (its tail decays as r_cut^-11 and is dropped).
    """

    potential_energy: float
    virial: float
    laplacian: float
    gradsq: float
    forces: np.ndarray
    min_distance: float


@dataclass(frozen=True)
class McEstimate:
    """Blocked estimate: mean, 68%-confidence error, sample count."""

    mean: float
    std_err: float
    n_samples: int
    status: str = "ok"


@dataclass
class McResult:
    params: McParams
    state: StatePoint
    lambda_over_sigma: float
    backend: str
    acceptance: float
    max_displacement: float
    pressure: McEstimate
    energy_per_particle: McEstimate
    forms: dict[str, McEstimate]
    mean_laplacian: McEstimate
    mean_gradsq: McEstimate
    w1_imag_mean: McEstimate
    g_r: tuple[np.ndarray, np.ndarray]
    energy_drift: float
    block_values: dict[str, np.ndarray] = field(default_factory=dict)


def fcc_lattice(n_particles: int, rho: float) -> Configuration:
    """FCC-derived start: first n sites of the smallest enclosing fcc grid.

    Sites are ordered cell-by-cell, so a partial last shell leaves
    vacancies that anneal out during equilibration.
    """
    if rho <= 0:
        raise ValueError("density must be positive")
    box = (n_particles / rho) ** (1.0 / 3.0)
    ncell = max(1, math.ceil((n_particles / 4.0) ** (1.0 / 3.0)))
    a = box / ncell
    if a / math.sqrt(2.0) < 0.72:
        raise InitializationError(
            f"nearest-neighbour spacing {a / math.sqrt(2.0):.3f} sigma too small "
            f"for an overlap-free lattice start at rho = {rho}"
        )
    base = np.array(
        [[0.0, 0.0, 0.0], [0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]]
    )
    sites = []
    for cx in range(ncell):
        for cy in range(ncell):
            for cz in range(ncell):
                for b in base:
                    sites.append((np.array([cx, cy, cz]) + b) * a)
                    if len(sites) == n_particles:
                        break
                if len(sites) == n_particles:
                    break
            if len(sites) == n_particles:
                break
        if len(sites) == n_particles:
            break
    pos = np.ascontiguousarray(np.array(sites) % box)
    return Configuration(positions=pos, box_length=box)


def observables(config: Configuration, r_cut: float) -> ConfigObservables:
    """Tail-corrected pair observables of one configuration.

    Raises OverlapError below 0.3 sigma separation (unphysical after
    equilibration; guards the r^-12 sums against blow-up).
    """
    n = config.n_particles
    rho = config.density
    u, virial, lap, gradsq, forces, min_dist = kernels.pair_observables(
        config.positions, config.box_length, r_cut
    )
    if min_dist < 0.3:
        raise OverlapError(
            f"pair separation {min_dist:.3f} sigma below the 0.3 sigma guard"
        )
    return ConfigObservables(
        potential_energy=u + energy_tail_per_config(n, rho, r_cut),
        virial=virial + virial_tail_per_config(n, rho, r_cut),
        laplacian=lap + laplacian_tail_per_config(n, rho, r_cut),
        gradsq=gradsq,
        forces=forces,
        min_distance=min_dist,
    )


def sample_momenta(
    rng: np.random.Generator,
    n_particles: int,
    species: SpeciesParams,
    state: StatePoint,
    n_sets: int = 1,
) -> np.ndarray:
    """(n_sets, N, 3) Gaussian momenta, variance m k_B T = T* per component."""
    return math.sqrt(state.t_reduced) * rng.standard_normal((n_sets, n_particles, 3))


def w1_w2(
    config: Configuration,
    momenta: np.ndarray,
    species: SpeciesParams,
    state: StatePoint,
    r_cut: float = 3.5,
) -> tuple[float, float]:
    """(w1 imaginary coefficient, w2) for one configuration and momentum set.

    w1 = -i (beta^2 / 2m) p . grad U  (the returned number multiplies i);
    w2 = (beta^3 / 6 m^2) pp:gradgrad U + (beta^3 / 6 m) |grad U|^2
         - (beta^2 / 4 m) laplacian U,
    in reduced units with m = 1 and no tail corrections (bare pair sums).
    """
    beta = state.beta
    u, virial, lap, gradsq, forces, _ = kernels.pair_observables(
        config.positions, config.box_length, r_cut
    )
    pphpp = float(
        kernels.hessian_quadratic_form(
            config.positions, config.box_length, r_cut, momenta[None, :, :]
        )[0]
    )
    p_dot_grad = -float(np.einsum("ij,ij->", momenta, forces))
    w1_imag = -0.5 * beta * beta * p_dot_grad
    w2 = beta**3 / 6.0 * pphpp + beta**3 / 6.0 * gradsq - beta * beta / 4.0 * lap
    return w1_imag, w2


def _blocked(values: np.ndarray, n_samples: int, status: str = "ok") -> McEstimate:
    values = np.asarray(values, dtype=float)
    mean = float(np.mean(values))
    err = float(np.std(values, ddof=1) / math.sqrt(len(values)))
    return McEstimate(mean=mean, std_err=err, n_samples=n_samples, status=status)


def _cumulant_constant(w: np.ndarray) -> complex:
    """D = <w> + <D2>/2 + <D3>/6 + <D4>/24 - <D2>^2/8 over complex samples."""
    m = np.mean(w)
    d = w - m
    d2 = np.mean(d * d)
    d3 = np.mean(d * d * d)
    d4 = np.mean(d * d * d * d)
    return m + d2 / 2.0 + d3 / 6.0 + d4 / 24.0 - d2 * d2 / 8.0


def estimator_forms(
    lap_blocks: np.ndarray,
    gradsq_blocks: np.ndarray,
    w_blocks: list[np.ndarray],
    h2m: float,
    state: StatePoint,
    volume: float,
) -> tuple[dict[str, McEstimate], McEstimate]:
    """Blocked estimates of the four correction forms, all per volume.

    a = hbar^2 [ -(beta^2/12m) <lap U> + (beta^3/24m) <gradsq U> ] / V
    b = -hbar^2 (beta^2/24m) <lap U> / V
    c = Re D(Delta w) / V         (cumulant constant per block)
    d = ln < Re exp(w) > / V      (raw float64; overflow flagged)

    Also returns the blocked imaginary part of w1 (must vanish by
    momentum-reversal symmetry; kept as a diagnostic).
    """
    beta = state.beta
    n_blocks = len(w_blocks)
    a_vals = h2m * (-beta**2 / 12.0 * lap_blocks + beta**3 / 24.0 * gradsq_blocks) / volume
    b_vals = -h2m * beta**2 / 24.0 * lap_blocks / volume

    c_vals = np.empty(n_blocks)
    d_vals = np.empty(n_blocks)
    imag_vals = np.empty(n_blocks)
    d_status = "ok"
    for k, w in enumerate(w_blocks):
        c_vals[k] = _cumulant_constant(w).real
        imag_vals[k] = float(np.mean(w.imag))
        with np.errstate(over="ignore", invalid="ignore"):
            re_exp = np.exp(w.real) * np.cos(w.imag)
            mean_re = np.mean(re_exp)
        if not np.isfinite(mean_re):
            d_status = "overflow"
            d_vals[k] = math.nan
        elif mean_re <= 0.0:
            # Phase cancellation drove the block mean non-positive; the
            # logarithm is undefined.  Kept distinct from overflow.
            if d_status == "ok":
                d_status = "undefined"
            d_vals[k] = math.nan
        else:
            d_vals[k] = math.log(mean_re) / volume

    n_w = sum(len(w) for w in w_blocks)
    forms = {
        "a": _blocked(a_vals, n_samples=len(lap_blocks)),
        "b": _blocked(b_vals, n_samples=len(lap_blocks)),
        "c": _blocked(c_vals / volume, n_samples=n_w),
        "d": (
            _blocked(d_vals, n_samples=n_w)
            if d_status == "ok"
            else McEstimate(math.nan, math.nan, n_w, status=d_status)
        ),
    }
    w1_imag = _blocked(imag_vals, n_samples=n_w)
    return forms, w1_imag


def _equilibrate(
    pos: np.ndarray,
    cache: np.ndarray,
    box: float,
    params: McParams,
    beta: float,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Tune max displacement toward 50% acceptance; returns (max_disp, last acc)."""
    n = params.n_particles
    max_disp = params.max_displacement or 0.4 / math.sqrt(beta)
    chunk = 50
    done = 0
    acc_rate = 0.0
    while done < params.n_equil_sweeps:
        sweeps = min(chunk, params.n_equil_sweeps - done)
        n_moves = sweeps * n
        disp = rng.uniform(-1.0, 1.0, (n_moves, 3))
        uacc = rng.uniform(0.0, 1.0, n_moves)
        n_acc, _ = kernels.metropolis_sweeps(
            pos, cache, box, params.r_cut, beta, max_disp, disp, uacc
        )
        acc_rate = n_acc / n_moves
        if params.max_displacement is None:
            factor = min(max(acc_rate / 0.5, 0.5), 2.0)
            max_disp = min(max(max_disp * factor, 1.0e-3), box / 4.0)
        done += sweeps
    return max_disp, acc_rate


def run_nvt(params: McParams, species: SpeciesParams, state: StatePoint) -> McResult:
    """Full NVT run: equilibrate, then n_blocks x configs_per_block sampling.

    Deterministic for fixed (params, species, state) and kernel backend.
    """
    n = params.n_particles
    rho = state.rho_reduced
    beta = state.beta
    config = fcc_lattice(n, rho)
    box = config.box_length
    if params.r_cut > box / 2.0:
        raise GeometryError(
            f"r_cut = {params.r_cut} exceeds half the box ({box / 2.0:.3f}) "
            f"for N = {n}, rho = {rho}"
        )
    volume = n / rho
    h2m = hbar_sq_over_m(species, state)
    hbar = math.sqrt(h2m)  # m = 1 in reduced units
    rng = np.random.default_rng(params.seed)

    pos = config.positions.copy()
    cache = kernels.build_pair_energy_cache(pos, box, params.r_cut)
    max_disp, _ = _equilibrate(pos, cache, box, params, beta, rng)

    n_cfg = params.configs_per_block
    n_mom = params.momentum_samples_per_config
    moves_per_sample = params.steps_per_atom_between_samples * n

    pressure_blocks = np.empty(params.n_blocks)
    energy_blocks = np.empty(params.n_blocks)
    lap_blocks = np.empty(params.n_blocks)
    gradsq_blocks = np.empty(params.n_blocks)
    w_blocks: list[np.ndarray] = []
    hist_total = np.zeros(params.hist_nbins, dtype=np.int64)
    n_acc_total = 0
    n_moves_total = 0
    max_drift = 0.0

    lap_tail = laplacian_tail_per_config(n, rho, params.r_cut)
    virial_tail = virial_tail_per_config(n, rho, params.r_cut)
    energy_tail = energy_tail_per_config(n, rho, params.r_cut)

    for block in range(params.n_blocks):
        u_tally = kernels.total_potential(pos, box, params.r_cut)
        sweep_count = 0
        lap_sum = 0.0
        gradsq_sum = 0.0
        virial_sum = 0.0
        energy_sum = 0.0
        w_samples = np.empty(n_cfg * n_mom, dtype=np.complex128)
        for cfg in range(n_cfg):
            disp = rng.uniform(-1.0, 1.0, (moves_per_sample, 3))
            uacc = rng.uniform(0.0, 1.0, moves_per_sample)
            n_acc, du = kernels.metropolis_sweeps(
                pos, cache, box, params.r_cut, beta, max_disp, disp, uacc
            )
            u_tally += du
            sweep_count += params.steps_per_atom_between_samples
            n_acc_total += n_acc
            n_moves_total += moves_per_sample

            pvecs = sample_momenta(rng, n, species, state, n_sets=n_mom)
            u, virial, lap, gradsq, forces, min_dist, pphpp, counts = (
                kernels.sample_config(
                    pos, box, params.r_cut, pvecs, params.hist_rmax, params.hist_nbins
                )
            )
            if min_dist < 0.3:
                raise OverlapError(
                    f"pair separation {min_dist:.3f} sigma below the 0.3 sigma guard"
                )
            hist_total += counts
            lap_t = lap + lap_tail
            lap_sum += lap_t
            gradsq_sum += gradsq
            virial_sum += virial + virial_tail
            energy_sum += u + energy_tail

            # w = hbar w1 + hbar^2 w2 per momentum draw; the Hessian
            # contraction gets the momentum-averaged tail T* lap_tail.
            p_dot_grad = -np.einsum("mij,ij->m", pvecs, forces)
            w1_imag = -0.5 * beta * beta * p_dot_grad
            w2 = (
                beta**3 / 6.0 * (pphpp + state.t_reduced * lap_tail)
                + beta**3 / 6.0 * gradsq
                - beta * beta / 4.0 * lap_t
            )
            w_samples[cfg * n_mom : (cfg + 1) * n_mom] = h2m * w2 + 1j * hbar * w1_imag

        u_full = kernels.total_potential(pos, box, params.r_cut)
        denom = max(abs(u_full), 1.0)
        max_drift = max(max_drift, abs(u_tally - u_full) / denom)

        pressure_blocks[block] = rho - beta * (virial_sum / n_cfg) / (3.0 * volume)
        energy_blocks[block] = (energy_sum / n_cfg) / n
        lap_blocks[block] = lap_sum / n_cfg
        gradsq_blocks[block] = gradsq_sum / n_cfg
        w_blocks.append(w_samples)

    forms, w1_imag_mean = estimator_forms(
        lap_blocks, gradsq_blocks, w_blocks, h2m, state, volume
    )

    # g(r) from the pair-distance histogram.
    edges = np.linspace(0.0, params.hist_rmax, params.hist_nbins + 1)
    centers = 0.5 * (edges[1:] + edges[:-1])
    shell = 4.0 * math.pi / 3.0 * (edges[1:] ** 3 - edges[:-1] ** 3)
    n_samples_cfg = params.n_blocks * n_cfg
    g_r = 2.0 * hist_total / (n_samples_cfg * n * rho * shell)

    n_w = params.n_blocks * n_cfg * n_mom
    lam = math.sqrt(h2m * 2.0 * math.pi / state.t_reduced)
    return McResult(
        params=params,
        state=state,
        lambda_over_sigma=lam,
        backend=kernels.backend_name(),
        acceptance=n_acc_total / max(n_moves_total, 1),
        max_displacement=max_disp,
        pressure=_blocked(pressure_blocks, n_samples=n_samples_cfg),
        energy_per_particle=_blocked(energy_blocks, n_samples=n_samples_cfg),
        forms=forms,
        mean_laplacian=_blocked(lap_blocks, n_samples=n_samples_cfg),
        mean_gradsq=_blocked(gradsq_blocks, n_samples=n_samples_cfg),
        w1_imag_mean=w1_imag_mean,
        g_r=(centers, g_r),
        energy_drift=max_drift,
        block_values={
            "pressure": pressure_blocks,
            "laplacian": lap_blocks,
            "gradsq": gradsq_blocks,
        },
    )


def dump_block_samples(result: McResult, path: str) -> None:
    """CSV of per-block estimator samples: block_index, estimator, value."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("block_index,estimator,value\n")
        for name, values in result.block_values.items():
            for k, v in enumerate(values):
                fh.write(f"{k},{name},{v:.17g}\n")
