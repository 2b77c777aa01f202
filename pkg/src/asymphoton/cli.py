"""Command-line interface.

Every subcommand is a thin adapter over the library; all probabilities are
computed by the library modules and only formatted here.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from asymphoton import __version__
from asymphoton.bandit import run_bandit
from asymphoton.config import (
    ConfigError,
    build_system_config,
    experiment_from_raw,
    parse_float,
    parse_int,
    parse_seed,
    parse_vector,
    read_config_file,
)
from asymphoton.distribution import SystemId
from asymphoton.errors import InvalidConfiguration, OutsideFrontierDomain, SolverFailure
from asymphoton.feasibility import FRONTIER_DOMAIN, frontier_row
from asymphoton.oam import bs_variant_distribution
from asymphoton.output import atomic_write_text, csv_text, fmt, json_text, json_value
from asymphoton.solver import Locus, oam_ratio_of_theta, solve_ratio
from asymphoton.sweep import SWEEP_COLUMNS, sweep_rows
from asymphoton.systems import describe, distribution_for

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2
SCHEMA_VERSION = 1

# flag -> parameter key
PARAM_FLAGS = {
    "--alpha": "alpha",
    "--beta": "beta",
    "--theta": "theta",
    "--a": "a",
    "--b": "b",
    "--phi": "phi",
    "--psi": "psi",
    "--theta1": "theta1",
    "--theta2": "theta2",
    "--hw1": "theta_hw1",
    "--hw2": "theta_hw2",
    "--ax": "alpha_x",
    "--bx": "beta_x",
    "--ay": "alpha_y",
    "--by": "beta_y",
    "--dx1": "d_x1",
    "--dx2": "d_x2",
    "--dy1": "d_y1",
    "--dy2": "d_y2",
}
_KEY_TO_FLAG = {v: k for k, v in PARAM_FLAGS.items()}


def _flag_label(key: str) -> str:
    return _KEY_TO_FLAG.get(key, f"--{key.replace('_', '-')}")


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _vec(values) -> str:
    return ",".join(fmt(v) for v in values)


def _param_text(value) -> str:
    return _vec(value) if isinstance(value, tuple) else fmt(value)


def _param_json(value):
    return [json_value(float(v)) for v in value] if isinstance(value, tuple) else json_value(float(value))


def _distribution_fields(dist) -> list:
    return [
        ("p12", dist.p12),
        ("p21", dist.p21),
        ("loss", dist.loss),
        ("conflict", dist.conflict),
        ("ratio", dist.ratio),
    ]


# --- probs ---------------------------------------------------------------------


def _system_values_from_args(args) -> dict:
    values = {}
    for flag, key in PARAM_FLAGS.items():
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    return values


def cmd_probs(args) -> int:
    raw = read_config_file(args.config) if args.config else {}
    system = args.system or raw.get("experiment", {}).get("system")
    if system is None:
        raise ConfigError("--system", "required (or give it in the config file)")
    values = dict(raw.get("system", {}))
    flag_values = _system_values_from_args(args)
    values.update(flag_values)
    label = lambda key: _flag_label(key) if key in flag_values or not args.config else f"[system] {key}"  # noqa: E731
    config = build_system_config(system, values, label)
    if system == "bs":
        dist = bs_variant_distribution(*config)
        params = [("a", config[0].amplitudes), ("b", config[1].amplitudes)]
    else:
        dist = distribution_for(config)
        params = describe(config)

    fields = _distribution_fields(dist)
    if args.format == "json":
        obj = {"schema_version": SCHEMA_VERSION, "system": system, "K": dist.K}
        obj["parameters"] = {name: _param_json(v) for name, v in params}
        obj["p"] = dist.p.tolist()
        obj.update({name: json_value(v) for name, v in fields})
        text = json_text(obj)
    elif args.format == "csv":
        text = csv_text(SWEEP_COLUMNS, [[v for _, v in fields]])
    else:
        lines = [f"system = {system}", f"K = {dist.K}"]
        lines += [f"{name} = {_param_text(v)}" for name, v in params]
        for i in range(dist.K):
            for j in range(dist.K):
                lines.append(f"p[{i + 1}][{j + 1}] = {fmt(dist.p[i, j])}")
        lines += [f"{name} = {fmt(v)}" for name, v in fields]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# --- sweep ---------------------------------------------------------------------


def cmd_sweep(args) -> int:
    raw = read_config_file(args.config) if args.config else {}
    overrides = {
        ("experiment", "system"): args.system,
        ("experiment", "seed"): args.seed,
        ("experiment", "out"): args.out,
        ("experiment", "format"): args.format,
        ("sweep", "samples"): args.samples,
        ("sweep", "arms"): args.arms,
    }
    if not raw and args.system is None:
        raise ConfigError("--system", "required")
    exp = experiment_from_raw(raw, overrides)
    if exp.arms != 2 and exp.system is not SystemId.OAM:
        raise ConfigError("--arms", f"the {exp.system.value} system has exactly 2 arms")
    workers = parse_int(args.workers, "--workers", minimum=1)
    rows = sweep_rows(exp.system, exp.samples, exp.seed, K=exp.arms, workers=workers)
    fmt_name = exp.format or "csv"
    if fmt_name == "json":
        obj = {
            "schema_version": SCHEMA_VERSION,
            "system": exp.system.value,
            "seed": exp.seed,
            "columns": list(SWEEP_COLUMNS),
            "rows": [[json_value(float(v)) for v in row] for row in rows],
        }
        text = json_text(obj)
    elif fmt_name == "csv":
        text = csv_text(SWEEP_COLUMNS, rows)
    else:
        raise ConfigError("--format", f"sweep writes csv or json, got {fmt_name!r}")
    _emit(text, exp.out)
    return EXIT_OK


# --- frontier --------------------------------------------------------------------


def _domain_listing() -> str:
    parts = []
    for system, (lo, hi) in FRONTIER_DOMAIN.items():
        parts.append(f"{system.value}: [{lo}, {hi}]")
    return "valid x-range per system: " + "; ".join(parts)


def cmd_frontier(args) -> int:
    system = SystemId(args.system)
    lo, hi = FRONTIER_DOMAIN[system]
    if args.x is not None:
        grid = parse_vector(args.x, "--x")
    else:
        points = parse_int(args.points, "--points", minimum=2)
        x_min = parse_float(args.x_min, "--x-min") if args.x_min is not None else lo
        x_max = parse_float(args.x_max, "--x-max") if args.x_max is not None else hi
        grid = tuple(np.linspace(x_min, x_max, points).tolist())
    bad = [x for x in grid if not lo <= x <= hi]
    if bad:
        raise ConfigError("--x", f"{fmt(bad[0])} is outside the {system.value} frontier; {_domain_listing()}")
    rows = []
    for x in grid:
        upper, lower = frontier_row(system, x)
        rows.append((x, upper, lower))
    if args.format == "json":
        obj = {
            "schema_version": SCHEMA_VERSION,
            "system": system.value,
            "columns": ["x", "y_upper", "y_lower"],
            "rows": [[json_value(v) for v in row] for row in rows],
        }
        text = json_text(obj)
    else:
        text = csv_text(("x", "y_upper", "y_lower"), rows)
    _emit(text, args.out)
    return EXIT_OK


# --- solve-ratio -----------------------------------------------------------------


def _parse_ratio(text) -> float:
    raw = str(text).strip().lower()
    r = math.inf if raw in ("inf", "infinity") else parse_float(raw, "--r")
    if not r > 0:
        raise ConfigError("--r", f"the asymmetry ratio must be positive, got {text!r}")
    return r


def cmd_solve_ratio(args) -> int:
    r = _parse_ratio(args.r)
    system = SystemId(args.system)
    kwargs = {"locus": args.locus} if system is SystemId.OAM else {}
    if args.locus != Locus.A2B1_ZERO.value and system is not SystemId.OAM:
        raise ConfigError("--locus", "only the oam system has a locus choice")
    sol = solve_ratio(system, r, **kwargs)
    x, y = sol.frontier_point
    achieved = [
        ("p12", sol.achieved_p12),
        ("p21", sol.achieved_p21),
        ("loss", sol.achieved_loss),
        ("conflict", sol.achieved_conflict),
        ("r", sol.achieved_r),
        ("residual", sol.residual),
        ("frontier_x", x),
        ("frontier_y", y),
        ("frontier_gap", sol.frontier_gap()),
    ]
    params = describe(sol.parameters)
    details = sorted(sol.details.items())
    if args.format == "json":
        obj = {
            "schema_version": SCHEMA_VERSION,
            "system": system.value,
            "target_r": json_value(sol.target_r),
            "parameters": {name: _param_json(v) for name, v in params},
            "details": {k: (v if isinstance(v, str) else json_value(float(v))) for k, v in details},
        }
        obj.update({name: json_value(v) for name, v in achieved})
        text = json_text(obj)
    else:
        lines = [f"system = {system.value}", f"target_r = {fmt(sol.target_r)}"]
        lines += [f"{name} = {_param_text(v)}" for name, v in params]
        lines += [f"{k} = {v if isinstance(v, str) else fmt(v)}" for k, v in details]
        lines += [f"{name} = {fmt(v)}" for name, v in achieved]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK if sol.residual <= 1e-9 else EXIT_RUNTIME


# --- bandit ----------------------------------------------------------------------


def cmd_bandit(args) -> int:
    raw = read_config_file(args.config) if args.config else {}
    overrides = {
        ("experiment", "system"): args.system,
        ("experiment", "seed"): args.seed,
        ("experiment", "out"): args.out,
        ("system", "target_r"): args.target_r,
        ("bandit", "rewards"): args.rewards,
        ("bandit", "trials"): args.trials,
    }
    if args.raw_loss:
        overrides[("bandit", "resample_on_loss")] = "false"
    if args.trials is not None:
        # report the flag itself for a bad trial count
        parse_int(args.trials, "--trials", minimum=1)
    if not raw and args.system is None:
        raise ConfigError("--system", "required (or pass --config)")
    exp = experiment_from_raw(raw, overrides)
    if exp.rewards is None:
        raise ConfigError("[bandit] rewards", "required")
    if exp.trials is None:
        raise ConfigError("[bandit] trials", "required")
    if (args.format or exp.format or "json") != "json":
        raise ConfigError("--format", "bandit reports are json only")
    config = exp.system_config()
    dist = distribution_for(config)
    if len(exp.rewards) != dist.K:
        raise ConfigError("[bandit] rewards", f"need {dist.K} reward means, got {len(exp.rewards)}")
    report = run_bandit(config, exp.rewards, exp.trials, exp.seed, resample_on_loss=exp.resample_on_loss)
    obj = {"schema_version": SCHEMA_VERSION, "system": exp.system.value}
    obj["parameters"] = {name: _param_json(v) for name, v in describe(config)}
    obj["analytic"] = {"p": dist.p.tolist(), "loss": dist.loss, "ratio": json_value(dist.ratio)}
    body = report.as_dict()
    body.pop("schema_version")
    obj.update(body)
    _emit(json_text(obj), exp.out)
    return EXIT_OK


# --- ratio curve -----------------------------------------------------------------


def cmd_ratio_curve(args) -> int:
    points = parse_int(args.points, "--points", minimum=2)
    margin = parse_float(args.margin, "--margin")
    if not 0.0 < margin < math.pi / 4:
        raise ConfigError("--margin", "must lie in (0, pi/4)")
    thetas = np.linspace(-math.pi / 4 + margin, math.pi / 4 - margin, points)
    if points % 2:
        thetas[points // 2] = 0.0
    rows = [(t, oam_ratio_of_theta(t, args.locus)) for t in thetas.tolist()]
    _emit(csv_text(("theta", "r"), rows), args.out)
    return EXIT_OK


# --- recipes ---------------------------------------------------------------------


def cmd_recipes(args) -> int:
    from asymphoton.recipes import format_summary, run_all_recipes

    results = run_all_recipes(args.manifest, workdir=args.workdir, external=args.external, only=args.only)
    sys.stdout.write(format_summary(results))
    if args.summary_json:
        atomic_write_text(args.summary_json, json_text({"schema_version": SCHEMA_VERSION, "recipes": [r.as_dict() for r in results]}))
    return EXIT_OK if all(r.passed for r in results) else EXIT_RUNTIME


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="asymphoton", description="Asymmetric photonic decision-making simulator.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("probs", help="print the joint decision distribution")
    p.add_argument("--system", choices=["oam", "entangled", "attenuation", "bs"])
    p.add_argument("--config")
    for flag, key in PARAM_FLAGS.items():
        p.add_argument(flag, dest=key, metavar="VALUE")
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_probs)

    p = sub.add_parser("sweep", help="random-configuration sweep to CSV")
    p.add_argument("--system", choices=[s.value for s in SystemId])
    p.add_argument("--config")
    p.add_argument("--samples")
    p.add_argument("--seed")
    p.add_argument("--arms")
    p.add_argument("--workers", default="1")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("frontier", help="loss-plus-conflict frontier curve")
    p.add_argument("--system", required=True, choices=[s.value for s in SystemId])
    p.add_argument("--x", help="comma-separated x values")
    p.add_argument("--points", default="101")
    p.add_argument("--x-min", dest="x_min")
    p.add_argument("--x-max", dest="x_max")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("solve-ratio", help="parameters realizing an asymmetry ratio")
    p.add_argument("--system", required=True, choices=[s.value for s in SystemId])
    p.add_argument("--r", required=True)
    p.add_argument("--locus", choices=[l.value for l in Locus], default=Locus.A2B1_ZERO.value)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve_ratio)

    p = sub.add_parser("bandit", help="two-player bandit Monte Carlo run, JSON report")
    p.add_argument("--config")
    p.add_argument("--system", choices=[s.value for s in SystemId])
    p.add_argument("--target-r", dest="target_r")
    p.add_argument("--rewards")
    p.add_argument("--trials")
    p.add_argument("--seed")
    p.add_argument("--raw-loss", action="store_true", help="count lost pairs as rounds without a decision")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_bandit)

    p = sub.add_parser("ratio-curve", help="asymmetry ratio against polarization angle")
    p.add_argument("--locus", choices=[l.value for l in Locus], default=Locus.A2B1_ZERO.value)
    p.add_argument("--points", default="10001")
    p.add_argument("--margin", default="1e-6")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ratio_curve)

    p = sub.add_parser("recipes", help="run every reproduction recipe")
    p.add_argument("--manifest")
    p.add_argument("--workdir")
    p.add_argument("--only", action="append")
    p.add_argument("--external", action="store_true", help="invoke the installed console script")
    p.add_argument("--summary-json", dest="summary_json")
    p.set_defaults(func=cmd_recipes)
    return parser


def main(argv=None) -> int:
    """Run the CLI and return the exit status instead of raising ``SystemExit``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help / --version and 2 for usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (ConfigError, InvalidConfiguration, OutsideFrontierDomain) as exc:
        sys.stderr.write(f"{parser.prog} {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except (OSError, SolverFailure, ArithmeticError, RuntimeError) as exc:
        sys.stderr.write(f"{parser.prog} {args.command}: {type(exc).__name__}: {exc}\n")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
