"""Timing comparison of the numba and numpy kernel backends.

Run as `python -m ljquantum.benchmark [--n 500] [--reps 5]`.  Imports
both backend modules directly, so the LJQUANTUM_KERNELS flag does not
matter here.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from .mc_engine import fcc_lattice


def _timeit(fn, reps: int) -> float:
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(n: int = 500, rho: float = 0.5, reps: int = 5) -> None:
    from .kernels import _numpy as knp

    try:
        from .kernels import _numba as knb
    except ImportError:
        knb = None
        print("numba unavailable; timing the numpy backend only")

    rng = np.random.default_rng(11)
    config = fcc_lattice(n, rho)
    pos = config.positions + rng.normal(0.0, 0.05, (n, 3))
    pos %= config.box_length
    box, rcut = config.box_length, 3.5
    pvecs = rng.standard_normal((10, n, 3))
    n_moves = 4 * n
    disp = rng.uniform(-1.0, 1.0, (n_moves, 3))
    uacc = rng.uniform(0.0, 1.0, n_moves)

    backends = [("numpy", knp)] + ([("numba", knb)] if knb else [])
    cases = {
        "total_potential": lambda k: k.total_potential(pos, box, rcut),
        "pair_observables": lambda k: k.pair_observables(pos, box, rcut),
        "sample_config (M=10)": lambda k: k.sample_config(pos, box, rcut, pvecs, 3.5, 175),
        "metropolis (4 sweeps)": lambda k: k.metropolis_sweeps(
            pos.copy(), k.build_pair_energy_cache(pos, box, rcut),
            box, rcut, 1.0 / 1.5, 0.2, disp, uacc,
        ),
    }

    print(f"N = {n}, rho = {rho}, r_cut = {rcut}, best of {reps}")
    header = f"{'kernel':<24}" + "".join(f"{name:>12}" for name, _ in backends)
    if knb:
        header += f"{'speedup':>10}"
    print(header)
    for case, call in cases.items():
        times = []
        for _, mod in backends:
            call(mod)  # warm up / JIT
            times.append(_timeit(lambda m=mod: call(m), reps))
        line = f"{case:<24}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if knb:
            line += f"{times[0] / times[1]:>9.1f}x"
        print(line)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--rho", type=float, default=0.5)
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args(argv)
    run(args.n, args.rho, args.reps)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
