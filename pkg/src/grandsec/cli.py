"""Command-line front end.

    grandsec exponents   --rate 116/128 --n-list 64,128,192,256
    grandsec simulate    --config fig2_rlc_128_116
    grandsec thresholds  --n 128 --k 116 --trials 1000
    grandsec oracle-check

Every command writes a CSV (the data of record) and a manifest next to it;
``--svg true`` adds figures. Exit codes: 0 success, 1 oracle failure,
2 usage/config error, 3 some simulation point failed.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .code import sample_rlc
from .exponents import (
    binary_entropy,
    capacity_point,
    confident_query_exponent,
    min_capacity_point,
    rate_function,
)
from .noise import BscNoise
from .report import (
    SWEEP_COLUMNS,
    ConfigError,
    load_config,
    sweep_config_from_mapping,
    sweep_rows,
    write_csv,
    write_manifest,
)
from .sim import empirical_confidence_threshold, run_sweep

EXIT_OK, EXIT_ORACLE, EXIT_CONFIG, EXIT_PARTIAL = 0, 1, 2, 3

THRESHOLD_COLUMNS = ["p", "n_g_star_theory", "a_empirical_50pct", "trials", "seed"]


def exponent_columns(n_list):
    return (
        ["p", "neglog10_p", "H", "C", "C_min", "I_of_1_minus_R"]
        + [f"succ_prob_est_n{n}" for n in n_list]
        + ["g_star"]
        + [f"n_g_star_n{n}" for n in n_list]
    )


def exponents_table(rate: float, n_list, points: int = 100) -> list:
    """Rows over ``points`` log-spaced BSC p from the capacity to the min-capacity point."""
    p_grid = np.geomspace(capacity_point(rate), min_capacity_point(rate), points)
    rows = []
    for p in p_grid:
        model = BscNoise(float(p))
        h = binary_entropy(model.p)
        h_min = -model.log2_q
        rate_value = rate_function(model, 1.0 - rate).value
        g_star = confident_query_exponent(model, rate)
        row = {
            "p": model.p,
            "neglog10_p": -math.log10(model.p),
            "H": h,
            "C": 1.0 - h,
            "C_min": 1.0 - h_min,
            "I_of_1_minus_R": rate_value,
            "g_star": g_star,
        }
        for n in n_list:
            row[f"succ_prob_est_n{n}"] = 2.0 ** (-n * rate_value)
            row[f"n_g_star_n{n}"] = None if g_star is None else n * g_star
        rows.append(row)
    return rows


def thresholds_table(n: int, k: int, p_grid, trials: int, seed: int, code_seed: int, target: float = 0.5) -> list:
    code = sample_rlc(n, k, code_seed)
    rate = k / n
    rows = []
    for i, p in enumerate(p_grid):
        model = BscNoise(float(p))
        g_star = confident_query_exponent(model, rate)
        rows.append({
            "p": model.p,
            "n_g_star_theory": None if g_star is None else n * g_star,
            "a_empirical_50pct": empirical_confidence_threshold(code, model, target, trials, seed, i),
            "trials": trials,
            "seed": seed,
        })
    return rows


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _rate(text: str) -> float:
    try:
        value = float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad code rate {text!r}") from None
    if not (0.0 < value < 1.0):
        raise argparse.ArgumentTypeError("code rate must lie in (0, 1)")
    return value


def _int_list(text: str):
    try:
        values = [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("expected positive integers")
    return values


def _float_list(text: str):
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _add_common(p):
    p.add_argument("--config", metavar="PATH", help="key = value config file or bundled config name")
    p.add_argument("--out", metavar="DIR", default="out", help="output directory (default: out)")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--code-seed", type=int, help="seed of the random linear code")
    p.add_argument("--trials", type=_positive, help="trials per point")
    p.add_argument("--points", type=_positive, help="number of grid points")
    p.add_argument("--svg", type=_bool, default=True, metavar="BOOL", help="also write SVG figures")
    p.add_argument("--threads", type=int, default=1, help="worker processes (0 = auto)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grandsec", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exponents", help="success exponents and confident-query thresholds (BSC)")
    _add_common(p)
    p.add_argument("--rate", type=_rate, default=116 / 128, help="code rate, e.g. 0.906 or 116/128")
    p.add_argument("--n-list", type=_int_list, default=[64, 128, 192, 256], help="block lengths")

    p = sub.add_parser("simulate", help="GRAND-with-abandonment Monte Carlo sweep")
    _add_common(p)

    p = sub.add_parser("thresholds", help="theoretical vs empirical 50%% confidence thresholds")
    _add_common(p)
    p.add_argument("--n", type=_positive, default=128)
    p.add_argument("--k", type=_positive, default=116)
    p.add_argument("--p-grid", type=_float_list, help="comma-separated BSC bit-flip probabilities")
    p.add_argument("--target", type=float, default=0.5, help="conditional success target")

    p = sub.add_parser("oracle-check", help="run brute-force validation suites at small n")
    p.add_argument("--trials", type=_positive, default=1000, help="ML-equivalence trials per p")
    return parser


def _cmd_exponents(args) -> int:
    points = args.points or 100
    if points < 2:
        raise ConfigError("--points must be at least 2")
    rows = exponents_table(args.rate, args.n_list, points)
    out = Path(args.out)
    csv_path = write_csv(out / "exponents.csv", exponent_columns(args.n_list), rows)
    write_manifest(out / "exponents.manifest", [
        f"rate = {args.rate!r}",
        "n_list = " + ", ".join(str(n) for n in args.n_list),
        f"points = {points}",
    ], source="exponents")
    print(f"wrote {csv_path}")
    if args.svg:
        from .plotting import plot_exponents

        plot_exponents(rows, args.n_list, out / "exponents_success.svg", out / "exponents_queries.svg")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    if not args.config:
        raise ConfigError("simulate needs --config PATH (or a bundled config name)")
    entries, source = load_config(args.config)
    overrides = {"master_seed": args.seed, "code_seed": args.code_seed, "trials_per_point": args.trials}
    config = sweep_config_from_mapping(entries, source, overrides)
    if args.points and config.noise_kind == "bsc":
        lo, hi = min(config.p_grid), max(config.p_grid)
        grid = tuple(float(p) for p in np.geomspace(lo, hi, args.points))
        config = sweep_config_from_mapping(entries, source, {**overrides, "p_grid": grid})
    started = time.time()
    rows = sweep_rows(run_sweep(config, threads=args.threads))
    out = Path(args.out)
    csv_path = write_csv(out / f"{config.name}.csv", SWEEP_COLUMNS, rows)
    write_manifest(out / f"{config.name}.manifest", config, source=source)
    print(f"wrote {csv_path} ({len(rows)} rows, {time.time() - started:.1f}s)")
    if args.svg:
        from .plotting import plot_sweep

        rate = config.k / config.n
        plot_sweep(rows, str(out / config.name),
                   -math.log10(capacity_point(rate)), -math.log10(min_capacity_point(rate)))
    failed = [r for r in rows if r["failure"]]
    for r in failed:
        print(f"point p={r['p']} a={r['a']} failed: {r['failure']}", file=sys.stderr)
    return EXIT_PARTIAL if failed else EXIT_OK


def _cmd_thresholds(args) -> int:
    n, k, trials, seed, code_seed, target = args.n, args.k, args.trials, args.seed, args.code_seed, args.target
    p_grid = args.p_grid
    source = "flags"
    if args.config:
        entries, source = load_config(args.config)
        cfg = sweep_config_from_mapping(entries, source)
        n, k = cfg.n, cfg.k
        p_grid = p_grid or list(cfg.p_grid)
        trials = trials or cfg.trials_per_point
        seed = cfg.master_seed if seed is None else seed
        code_seed = cfg.code_seed if code_seed is None else code_seed
        if "target" in entries:
            target = float(entries["target"][0])
    if not (1 <= k < n):
        raise ConfigError(f"need 1 <= k < n, got n={n}, k={k}")
    if not (0.0 < target < 1.0):
        raise ConfigError("--target must lie in (0, 1)")
    rate = k / n
    if not p_grid:
        lo, hi = capacity_point(rate) / 1.5, min(0.49, min_capacity_point(rate) * 1.3)
        p_grid = [float(p) for p in np.geomspace(lo, hi, args.points or 12)]
    if any(not (0.0 < p < 0.5) for p in p_grid):
        raise ConfigError("p-grid values must lie in (0, 0.5)")
    trials = trials or 1000
    seed = 1 if seed is None else seed
    code_seed = 1 if code_seed is None else code_seed
    rows = thresholds_table(n, k, p_grid, trials, seed, code_seed, target)
    out = Path(args.out)
    csv_path = write_csv(out / "thresholds.csv", THRESHOLD_COLUMNS, rows)
    write_manifest(out / "thresholds.manifest", [
        "name = thresholds",
        f"n = {n}",
        f"k = {k}",
        "p_grid = " + ", ".join(repr(float(p)) for p in p_grid),
        f"trials_per_point = {trials}",
        f"master_seed = {seed}",
        f"code_seed = {code_seed}",
        f"target = {target!r}",
    ], source=source)
    print(f"wrote {csv_path}")
    if args.svg:
        from .plotting import plot_thresholds

        plot_thresholds(rows, out / "thresholds.svg",
                        -math.log10(capacity_point(rate)), -math.log10(min_capacity_point(rate)))
    return EXIT_OK


def _cmd_oracle_check(args) -> int:
    from .oracles import conjugate_suite, ml_equivalence_suite, moment_suite

    ok = True
    for suite in (lambda: ml_equivalence_suite(args.trials), moment_suite, conjugate_suite):
        started = time.time()
        result = suite()
        print(f"{result.line()} [{time.time() - started:.1f}s]")
        ok &= result.passed
    return EXIT_OK if ok else EXIT_ORACLE


COMMANDS = {
    "exponents": _cmd_exponents,
    "simulate": _cmd_simulate,
    "thresholds": _cmd_thresholds,
    "oracle-check": _cmd_oracle_check,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"grandsec: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
