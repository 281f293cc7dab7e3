"""Batch front end: isotherm sweeps, benchmark-table runs, and oracle checks.

Configuration comes from an INI-style file (sections [species], [state],
[solver], [corrections], [mc], [output]) merged with command-line flags;
flags win.  All CSV output uses 17-significant-digit floats so reruns
diff byte-for-byte.
"""

from __future__ import annotations

import argparse
import configparser
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .units_species import (
    SpeciesParams,
    StatePoint,
    Statistics,
    builtin_species,
    thermal_wavelength,
)
from .oz_hnc import (
    RadialGrid,
    SolverOptions,
    ConvergenceError,
    StabilityError,
    solve_hnc,
    virial_pressure,
    dump_csv,
)
from .quantum_corrections import (
    TripletModel,
    TripletQuadSpec,
    omega_1_2,
    omega_2_0,
    omega_2_1,
    omega_3_0,
)
from .ideal_gas import ideal_loop_quadrature, tridiag_det, tridiag_matrix
from .mc_engine import McParams, run_nvt

SWEEP_COLUMNS = (
    "T_star",
    "rho_star",
    "status",
    "beta_p_classical",
    "o12_pair",
    "o12_triplet",
    "o20",
    "o21",
    "o30",
    "lambda_over_sigma",
)
ALL_CORRECTIONS = ("classical", "o12_pair", "o12_triplet", "o20", "o21", "o30")


class ConfigError(ValueError):
    """Bad config file or flag combination."""


def _fmt(x: float) -> str:
    return f"{x + 0.0:.17g}"  # +0.0 folds IEEE negative zero into "0"


def parse_values(text: str) -> list[float]:
    """Comma list ('0.5, 0.6') or inclusive range ('0.1:0.9:0.05')."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range syntax is start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ConfigError(f"range step must be positive in {text!r}")
        out = []
        v = start
        while v <= stop + 1e-12:
            out.append(round(v, 12))
            v += step
        return out
    return [float(p) for p in text.split(",") if p.strip()]


def _load_config(path: str | None) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if path:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        try:
            cp.read(path)
        except configparser.Error as exc:
            raise ConfigError(f"config parse error in {path}: {exc}") from exc
    return cp


def _species_from_config(cp: configparser.ConfigParser, override: str | None) -> SpeciesParams:
    name = override or cp.get("species", "name", fallback="helium")
    base = builtin_species(name)
    if cp.has_section("species"):
        sec = cp["species"]
        mass = sec.getfloat("mass", base.mass)
        eps = sec.getfloat("eps_over_kB", base.eps_over_kB)
        sigma = sec.getfloat("sigma_nm", base.sigma)
        stats = Statistics(sec.get("statistics", base.statistics.value).lower())
        return SpeciesParams(name, mass, eps, sigma, stats)
    return base


def _solver_from_args(cp, args) -> tuple[RadialGrid, SolverOptions]:
    sec = cp["solver"] if cp.has_section("solver") else {}

    def pick(flag, key, default, cast):
        if flag is not None:
            return flag
        if key in sec:
            return cast(sec[key])
        return default

    grid = RadialGrid(
        n_points=int(pick(getattr(args, "n_points", None), "n_points", 4096, int)),
        dr=float(pick(getattr(args, "dr", None), "dr", 0.01, float)),
    )
    opts = SolverOptions(
        mixing=float(pick(getattr(args, "mixing", None), "mixing", 0.2, float)),
        tol=float(pick(getattr(args, "tol", None), "tol", 1.0e-8, float)),
        max_iter=int(pick(getattr(args, "max_iter", None), "max_iter", 50000, int)),
    )
    return grid, opts


def _sweep_one(task):
    """Worker: one (T*, rho) state point -> CSV row dict."""
    species, tstar, rho, corrections, grid_kw, opts_kw, statistics = task
    state = StatePoint(tstar, rho)
    grid = RadialGrid(**grid_kw)
    opts = SolverOptions(**opts_kw)
    lam = thermal_wavelength(species, state)
    row = {c: "" for c in SWEEP_COLUMNS}
    row["T_star"] = _fmt(tstar)
    row["rho_star"] = _fmt(rho)
    try:
        pf = solve_hnc(state, grid, opts)
    except (ConvergenceError, StabilityError):
        row["status"] = "spinodal"
        return row
    row["status"] = "ok"
    row["lambda_over_sigma"] = _fmt(lam)
    triplet = TripletModel(pf)
    if "classical" in corrections:
        row["beta_p_classical"] = _fmt(virial_pressure(pf, state))
    if "o12_pair" in corrections:
        row["o12_pair"] = _fmt(omega_1_2(pf, triplet, state, species, "pair_only"))
    if "o12_triplet" in corrections:
        row["o12_triplet"] = _fmt(omega_1_2(pf, triplet, state, species, "with_triplet"))
    if "o20" in corrections:
        row["o20"] = _fmt(omega_2_0(pf, lam, rho, statistics))
    if "o21" in corrections:
        row["o21"] = _fmt(omega_2_1(pf, state, species, statistics))
    if "o30" in corrections:
        row["o30"] = _fmt(omega_3_0(pf, triplet, lam, rho))
    return row


def _default_jobs(args_jobs: int | None, cp) -> int:
    if args_jobs is not None:
        return max(1, args_jobs)
    if cp.has_section("output") and "jobs" in cp["output"]:
        return max(1, cp["output"].getint("jobs"))
    env = os.environ.get("LJQUANTUM_JOBS", "").strip()
    return max(1, int(env)) if env else 1


def cmd_sweep(args) -> int:
    cp = _load_config(args.config)
    species = _species_from_config(cp, args.species)
    statistics = Statistics(args.statistics) if args.statistics else species.statistics

    tstars = parse_values(
        args.tstar or cp.get("state", "tstar", fallback="0.5, 0.6, 0.8, 1.0")
    )
    rhos = parse_values(args.rho or cp.get("state", "rho", fallback="0.1:0.9:0.05"))
    if not tstars or not rhos:
        raise ConfigError("empty temperature or density sweep")

    corrections = tuple(
        c.strip()
        for c in (
            args.corrections
            or cp.get("corrections", "set", fallback=",".join(ALL_CORRECTIONS))
        ).split(",")
        if c.strip()
    )
    unknown = set(corrections) - set(ALL_CORRECTIONS)
    if unknown:
        raise ConfigError(f"unknown corrections {sorted(unknown)}; valid: {ALL_CORRECTIONS}")

    grid, opts = _solver_from_args(cp, args)
    out_path = args.output or cp.get("output", "path", fallback="sweep.csv")
    jobs = _default_jobs(args.jobs, cp)

    grid_kw = {"n_points": grid.n_points, "dr": grid.dr}
    opts_kw = {"mixing": opts.mixing, "tol": opts.tol, "max_iter": opts.max_iter}
    tasks = [
        (species, t, r, corrections, grid_kw, opts_kw, statistics)
        for t in sorted(tstars)
        for r in sorted(rhos)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_one, tasks))
    else:
        rows = [_sweep_one(t) for t in tasks]

    rows.sort(key=lambda r: (float(r["T_star"]), float(r["rho_star"])))
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(",".join(SWEEP_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(row[c] for c in SWEEP_COLUMNS) + "\n")
    n_ok = sum(1 for r in rows if r["status"] == "ok")
    print(f"wrote {out_path}: {len(rows)} state points ({n_ok} converged)")
    return 0


def _table1_cell(task):
    species, n, mc_kw, statistics = task
    params = McParams(n_particles=n, **mc_kw)
    state = StatePoint(1.5, 0.5)
    res = run_nvt(params, species, state)
    rows = []
    for form in ("a", "b", "c", "d"):
        est = res.forms[form]
        if est.status != "ok":
            rows.append((species.name, n, form, "-", "-"))
        else:
            rows.append((species.name, n, form, _fmt(est.mean), _fmt(est.std_err)))
    rows.append(
        (species.name, n, "pressure", _fmt(res.pressure.mean), _fmt(res.pressure.std_err))
    )
    return rows


def cmd_table1(args) -> int:
    cp = _load_config(args.config)
    names = [s.strip() for s in (args.species_list or "neon,helium").split(",") if s.strip()]
    sizes = [int(s) for s in (args.sizes or "250,500,1000").split(",")]
    sec = cp["mc"] if cp.has_section("mc") else {}

    def pick(flag, key, default, cast=int):
        if flag is not None:
            return flag
        if key in sec:
            return cast(sec[key])
        return default

    mc_kw = {
        "n_blocks": pick(args.blocks, "n_blocks", 50),
        "configs_per_block": pick(args.configs, "configs_per_block", 100),
        "steps_per_atom_between_samples": pick(args.steps, "steps_per_atom", 20),
        "r_cut": pick(args.rcut, "r_cut", 3.5, float),
        "momentum_samples_per_config": pick(
            args.momentum_samples, "momentum_samples_per_config", 10
        ),
        "n_equil_sweeps": pick(args.equil, "n_equil_sweeps", 2000),
    }
    base_seed = pick(args.seed, "seed", 20161010)
    jobs = _default_jobs(args.jobs, cp)

    tasks = []
    for si, name in enumerate(names):
        species = _species_from_config(cp, name)
        for ni, n in enumerate(sizes):
            kw = dict(mc_kw)
            kw["seed"] = base_seed + 1000 * si + ni
            tasks.append((species, n, kw, species.statistics))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            all_rows = list(pool.map(_table1_cell, tasks))
    else:
        all_rows = [_table1_cell(t) for t in tasks]

    out_path = args.output or cp.get("output", "path", fallback="table1.csv")
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write("species,N,form,mean,std_err\n")
        for rows in all_rows:
            for name, n, form, mean, err in rows:
                fh.write(f"{name},{n},{form},{mean},{err}\n")
    print(f"wrote {out_path}: {sum(len(r) for r in all_rows)} rows")
    return 0


def cmd_ideal_check(args) -> int:
    ok = True
    for l in (2, 3, 4):
        got = ideal_loop_quadrature(l, lam=1.1)
        want = l ** (-2.5)
        rel = abs(got - want) / want
        passed = rel < 1.0e-8
        ok &= passed
        print(f"loop l={l}: quadrature {got:.12f} vs {want:.12f} "
              f"rel {rel:.2e} [{'PASS' if passed else 'FAIL'}]")
    import numpy as np

    for n in range(1, 21):
        got = tridiag_det(n)
        passed = got == n + 1
        if n <= 8:
            direct = int(round(float(np.linalg.det(tridiag_matrix(n)))))
            passed = passed and direct == n + 1
        ok &= passed
        if not passed or n in (1, 8, 20):
            print(f"tridiag det n={n}: {got} vs {n + 1} [{'PASS' if passed else 'FAIL'}]")
    print("ideal-check:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_hnc_dump(args) -> int:
    cp = _load_config(args.config)
    grid, opts = _solver_from_args(cp, args)
    state = StatePoint(args.tstar_single, args.rho_single)
    pf = solve_hnc(state, grid, opts)
    out_path = args.output or "gr.csv"
    dump_csv(pf, out_path)
    print(f"wrote {out_path}: {grid.n_points} grid points, "
          f"residual {pf.residual:.2e} after {pf.n_iterations} iterations")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ljquantum",
        description="Classical grand potential and leading quantum corrections "
        "for a Lennard-Jones fluid",
    )
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file; flags override it")
    common.add_argument("--output", "-o", help="output CSV path")
    common.add_argument("--jobs", type=int, help="worker processes (env LJQUANTUM_JOBS)")
    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--n-points", type=int, dest="n_points")
    solver.add_argument("--dr", type=float)
    solver.add_argument("--mixing", type=float)
    solver.add_argument("--tol", type=float)
    solver.add_argument("--max-iter", type=int, dest="max_iter")

    ps = sub.add_parser("sweep", parents=[common, solver],
                        help="isotherm sweep: HNC + correction quadratures to CSV")
    ps.add_argument("--species", help="built-in species name")
    ps.add_argument("--statistics", choices=["boson", "fermion"])
    ps.add_argument("--tstar", help="temperatures: list '0.5,1.0' or range '0.5:1.0:0.1'")
    ps.add_argument("--rho", help="densities: list or range")
    ps.add_argument("--corrections", help=f"subset of {','.join(ALL_CORRECTIONS)}")
    ps.set_defaults(func=cmd_sweep)

    pt = sub.add_parser("table1", parents=[common],
                        help="Monte Carlo correction benchmark table to CSV")
    pt.add_argument("--species-list", dest="species_list", help="default neon,helium")
    pt.add_argument("--sizes", help="particle counts, default 250,500,1000")
    pt.add_argument("--blocks", type=int)
    pt.add_argument("--configs", type=int)
    pt.add_argument("--steps", type=int)
    pt.add_argument("--rcut", type=float)
    pt.add_argument("--momentum-samples", type=int, dest="momentum_samples")
    pt.add_argument("--equil", type=int)
    pt.add_argument("--seed", type=int)
    pt.set_defaults(func=cmd_table1)

    pi = sub.add_parser("ideal-check", help="ideal-gas loop quadrature oracle suite")
    pi.set_defaults(func=cmd_ideal_check)

    ph = sub.add_parser("hnc-dump", parents=[common, solver],
                        help="dump g(r), h(r), c(r) for one state point")
    ph.add_argument("--tstar", type=float, required=True, dest="tstar_single")
    ph.add_argument("--rho", type=float, required=True, dest="rho_single")
    ph.set_defaults(func=cmd_hnc_dump)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
