"""Command-line front end: one subcommand per experiment, CSV + JSON output."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .config import (
    ExperimentConfig,
    build_model,
    config_hash,
    make_config,
    parse_config_file,
)
from .errors import ConfigError, CoverageError, DomainError, ModelRejectedError
from .experiments import (
    ExperimentResult,
    asclt_experiment,
    clt_experiment,
    covariance_decay_experiment,
    dyadic_ts,
    gaussian_calibration,
    il_criterion_scan,
    lemma1_demo,
    poincare_gamma_check,
    simulate_series,
)
from .fields import theta_grid
from .noise import SpaceTimeWindow, sample_prm
from .oracle import MomentOracle
from .solver import evaluate_field, solve_fast

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_COVERAGE = 4

_COMMANDS = (
    "oracle",
    "simulate",
    "clt",
    "asclt",
    "il",
    "cov-decay",
    "lemma1",
    "poincare",
    "calibrate",
)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))  # shortest round-trip decimal
    return str(v)


def write_csv(path: str, meta: dict, table: dict) -> None:
    """Columns are parallel arrays; '# key=value' header lines carry the meta."""
    cols = list(table.keys())
    arrays = [np.asarray(table[c]) for c in cols]
    n = len(arrays[0]) if arrays else 0
    lines = [f"# {k}={_fmt(v)}" for k, v in meta.items()]
    lines.append(",".join(cols))
    for i in range(n):
        lines.append(",".join(_fmt(a[i]) for a in arrays))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _jsonify(v):
    if isinstance(v, dict):
        return {k: _jsonify(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonify(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if np.isfinite(f) else None  # strict JSON: no bare NaN/Inf
    return v


def write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonify(payload), fh, sort_keys=True, indent=2, allow_nan=False)
        fh.write("\n")


def _emit(cfg: ExperimentConfig, result: ExperimentResult) -> list[str]:
    outdir = os.path.dirname(cfg.out)
    if outdir:
        os.makedirs(outdir, exist_ok=True)
    meta = {
        "version": __version__,
        "experiment": cfg.experiment,
        "seed": cfg.seed,
        "config_hash": config_hash(cfg),
    }
    written = []
    for name, table in result.tables.items():
        path = f"{cfg.out}_{name}.csv"
        write_csv(path, meta, table)
        written.append(path)
    path = f"{cfg.out}_summary.json"
    write_json(path, {**meta, "summary": result.summary})
    written.append(path)
    return written


def _oracle_tables(cfg: ExperimentConfig) -> ExperimentResult:
    model = build_model(cfg)
    oracle = MomentOracle.from_model(model, cfg.t0)
    grid = theta_grid(cfg.theta_max, cfg.points_per_decade)
    sig2 = oracle.variance_F(grid)
    theta = cfg.theta[0]
    ws = [r * theta for r in (4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0)]
    ws = [w for w in ws if w <= cfg.theta_max] or [4.0 * theta]
    cov = np.asarray([oracle.covariance_F(theta, w) for w in ws])
    corr = np.asarray([oracle.correlation_F(theta, w) for w in ws])
    tables = {
        "sigma": {"theta": grid, "sigma2": sig2, "sigma2_over_theta": sig2 / grid},
        "cov": {
            "theta": np.full(len(ws), theta),
            "w": np.asarray(ws),
            "cov": cov,
            "corr": corr,
            "bound_ratio": corr * np.sqrt(np.asarray(ws) / theta),
        },
    }
    i0, i1 = oracle.rho_integrals()
    summary = {
        "c": oracle.c,
        "g_t0": oracle.second_moment(cfg.t0),
        "rho_integral": i0,
        "rho_weighted_integral": i1,
    }
    return ExperimentResult(tables=tables, summary=summary)


def _simulate_tables(cfg: ExperimentConfig) -> ExperimentResult:
    model = build_model(cfg)
    oracle = MomentOracle.from_model(model, cfg.t0)
    grid = theta_grid(cfg.theta_max, cfg.points_per_decade)
    rows = {"seed": [], "theta": [], "F": [], "F_std": []}
    pieces_table = None
    for rep in range(cfg.seeds):
        series = simulate_series(model, cfg.t0, grid, cfg.seed, rep, oracle)
        rows["seed"].append(np.full(len(grid), rep))
        rows["theta"].append(series.theta)
        rows["F"].append(series.f)
        rows["F_std"].append(series.fstd)
        if rep == 0:
            window = SpaceTimeWindow.for_interval(cfg.t0, -cfg.theta_max, cfg.theta_max)
            pconf = sample_prm(model, window, (cfg.seed, rep))
            field = evaluate_field(solve_fast(pconf))
            left, right, value = field.pieces()
            pieces_table = {"x_left": left, "x_right": right, "u": value}
    tables = {
        "series": {k: np.concatenate(v) for k, v in rows.items()},
        "field": pieces_table,
    }
    return ExperimentResult(tables=tables, summary={"seeds": cfg.seeds, "theta_max": cfg.theta_max})


def _dispatch(cfg: ExperimentConfig) -> ExperimentResult:
    exp = cfg.experiment
    if exp == "oracle":
        return _oracle_tables(cfg)
    if exp == "simulate":
        return _simulate_tables(cfg)
    model = build_model(cfg)
    if exp == "clt":
        return clt_experiment(model, cfg.t0, cfg.theta, cfg.reps, cfg.seed, threads=cfg.threads)
    if exp == "asclt":
        return asclt_experiment(
            model,
            cfg.t0,
            cfg.theta_max,
            cfg.seeds,
            cfg.seed,
            points_per_decade=cfg.points_per_decade,
            threads=cfg.threads,
            mode=cfg.mode,
        )
    if exp == "il":
        return il_criterion_scan(
            model,
            cfg.t0,
            cfg.reps,
            cfg.seed,
            t_values=dyadic_ts(4.0, cfg.theta_max),
            s_max=cfg.s_max,
            s_step=cfg.s_step,
            points_per_decade=cfg.points_per_decade,
            threads=cfg.threads,
        )
    if exp == "cov-decay":
        theta = cfg.theta[0]
        if len(cfg.theta) > 1:
            ws = cfg.theta[1:]
        else:
            ws = [r * theta for r in (4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0) if r * theta <= cfg.theta_max]
        return covariance_decay_experiment(model, cfg.t0, theta, ws, cfg.reps, cfg.seed, threads=cfg.threads)
    if exp == "lemma1":
        return lemma1_demo(
            model,
            cfg.t0,
            cfg.theta_max,
            cfg.seeds,
            cfg.seed,
            clip_m=cfg.clip_m,
            points_per_decade=cfg.points_per_decade,
            threads=cfg.threads,
        )
    if exp == "poincare":
        return poincare_gamma_check(model, cfg.t0, cfg.theta, cfg.reps, cfg.seed, threads=cfg.threads)
    if exp == "calibrate":
        reps_list = sorted({100, 1000, int(cfg.reps)})
        return gaussian_calibration(reps_list, cfg.seed, threads=cfg.threads)
    raise ConfigError(f"unknown experiment {exp!r}")


_EPILOG = """\
CSV columns per experiment:
  oracle     sigma: theta,sigma2,sigma2_over_theta | cov: theta,w,cov,corr,bound_ratio
  simulate   series: seed,theta,F,F_std | field: x_left,x_right,u
  clt        clt: theta,d_kol,d_w1,d_fm,reps,floor
  asclt      asclt: seed_index,T,d_kol,d_w1,d_fm
  il         il: t,sup_avg_K2,sup_se,argmax_s,partial_integral | il_grid: t,s,avg_K2,se
  cov-decay  cov_decay: w,corr_analytic,corr_mc,mc_se,bound_ratio
  lemma1     lemma1: seed_index,f,T,L_T,bias_xseed
  poincare   poincare: theta,var_analytic,rhs_mc,rhs_se,margin_se
             gamma3: theta,gamma3_mc,mc_se,gamma3_bound
             claim: theta,w,corr_term,gamma1,gamma2,gamma3,total
  calibrate  calibrate: reps,d_kol,d_w1,d_fm,sqrt_r_d_kol

Every CSV begins with '# key=value' meta lines (version, experiment, seed,
config_hash); a <out>_summary.json carries the scalar summary.
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levywave",
        description="Wave equation driven by jump noise: simulation and limit experiments.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="experiment", required=True, metavar="|".join(_COMMANDS))
    for name in _COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="key=value config file ('#' comments)")
        p.add_argument("--seed", type=int, help="base RNG seed")
        p.add_argument("--reps", type=int, help="Monte Carlo replications")
        p.add_argument("--seeds", type=int, help="trajectory count for per-seed runs")
        p.add_argument(
            "--theta",
            help="comma-separated window half-lengths, ascending (e.g. 2,8,32)",
        )
        p.add_argument("--theta-max", dest="theta_max", type=float, help="largest window half-length")
        p.add_argument("--t0", type=float, help="observation time")
        p.add_argument("--model", choices=("two_point", "uniform", "atoms"), help="jump law")
        p.add_argument("--mass", type=float, help="total jump intensity")
        p.add_argument("--jump", type=float, help="jump scale a")
        p.add_argument("--atoms", help='atom list "z:mass,z:mass" for --model atoms')
        p.add_argument("--alpha", type=float, help="extra-moment exponent in (0, 1]")
        p.add_argument("--points-per-decade", dest="points_per_decade", type=int)
        p.add_argument("--s-max", dest="s_max", type=float, help="il: frequency grid limit")
        p.add_argument("--s-step", dest="s_step", type=float, help="il: frequency grid step")
        p.add_argument("--clip-m", dest="clip_m", type=float, help="lemma1: clip level")
        p.add_argument("--mode", choices=("wave", "iid"), help="asclt: trajectory source")
        p.add_argument("--threads", type=int, help="worker threads (results thread-count invariant)")
        p.add_argument("--out", help="output path prefix (default out/run)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles usage errors / --help itself
        return int(exc.code or 0)
    overrides = {k: v for k, v in vars(args).items() if k != "config"}
    if overrides.get("theta") is not None:
        overrides["theta"] = tuple(float(t) for t in overrides["theta"].split(","))
    try:
        file_values = parse_config_file(args.config) if args.config else {}
        file_values.pop("experiment", None)
        cfg = make_config(file_values, overrides)
        result = _dispatch(cfg)
        written = _emit(cfg, result)
    except CoverageError as exc:
        json.dump({"error": "coverage", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return EXIT_COVERAGE
    except (ConfigError, ModelRejectedError, DomainError) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return EXIT_CONFIG
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
