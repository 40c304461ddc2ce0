"""Acceptance criteria, one test each.

Every test prints (and records for the terminal summary) a single
``PASS``/``FAIL`` line with the measured quantity and its tolerance, then
asserts the criterion exactly as stated.
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from grandsec import cli
from grandsec.code import sample_rlc
from grandsec.exponents import (
    capacity_point,
    confident_query_exponent,
    guesswork_scgf,
    min_capacity_point,
    rate_function,
    shannon_entropy_rate,
)
from grandsec.noise import BscNoise, MarkovNoise
from grandsec.oracles import conjugate_suite, ml_equivalence_suite, moment_suite
from grandsec.report import load_config, sweep_config_from_mapping
from grandsec.sim import confidence_profile, run_point, run_sweep

RATE = 116 / 128
N_LIST = (64, 128, 192, 256)
P_CAP = capacity_point(RATE)
P_MIN_CAP = min_capacity_point(RATE)


def verdict(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


@pytest.fixture(scope="module")
def fig2_rows():
    entries, source = load_config("fig2_rlc_128_116")
    config = sweep_config_from_mapping(entries, source)
    started = time.perf_counter()
    rows = run_sweep(config)
    return config, rows, time.perf_counter() - started


def test_criterion_01_success_estimate_curves():
    started = time.perf_counter()
    rows = cli.exponents_table(RATE, N_LIST, 100)
    elapsed = time.perf_counter() - started
    first_rate = rows[0]["I_of_1_minus_R"]
    at_cap = abs(first_rate) < 1e-9 and all(rows[0][f"succ_prob_est_n{n}"] == pytest.approx(1.0, abs=1e-9) for n in N_LIST)
    decreasing = all(
        np.all(np.diff([r[f"succ_prob_est_n{n}"] for r in rows]) < 0) for n in N_LIST
    )
    ordered = all(
        np.all(np.diff([r[f"succ_prob_est_n{n}"] for n in N_LIST]) < 0) for r in rows[1:-1]
    )
    ok = at_cap and decreasing and ordered and elapsed < 1.0
    verdict(1, ok, f"|I| at capacity = {abs(first_rate):.1e} (< 1e-9), strictly decreasing in p: {decreasing}, "
                   f"decreasing in n at interior points: {ordered}, runtime {elapsed:.2f}s (< 1 s)")


def test_criterion_02_confident_query_curve():
    started = time.perf_counter()
    rows = cli.exponents_table(RATE, N_LIST, 100)
    interior = rows[1:-1]
    finite = all(
        r[f"n_g_star_n{n}"] is not None and math.isfinite(r[f"n_g_star_n{n}"]) and r[f"n_g_star_n{n}"] > 0
        for r in interior for n in N_LIST
    )
    absent = rows[-1]["g_star"] is None
    absent &= all(confident_query_exponent(BscNoise(p), RATE) is None for p in (0.07, 0.1, 0.2, 0.4))
    elapsed = time.perf_counter() - started
    ok = finite and absent and elapsed < 1.0
    verdict(2, ok, f"n*g* finite and positive on {len(interior)} interior points: {finite}, "
                   f"absent at/beyond min-capacity: {absent}, runtime {elapsed:.2f}s (< 1 s)")


def test_criterion_03_conjugate_oracle():
    started = time.perf_counter()
    result = conjugate_suite(pairs=50, tol=1e-6)
    elapsed = time.perf_counter() - started
    verdict(3, result.passed and elapsed < 10, f"{result.detail}, runtime {elapsed:.1f}s (< 10 s)")


def test_criterion_04_guesswork_moment_oracle():
    started = time.perf_counter()
    result = moment_suite(ps=(0.1, 0.25), alphas=(0.5, 1.0, 2.0), lengths=range(8, 17), tol=0.05)
    elapsed = time.perf_counter() - started
    verdict(4, result.passed and elapsed < 120, f"{result.detail}, runtime {elapsed:.1f}s (< 120 s)")


def test_criterion_05_ml_equivalence():
    started = time.perf_counter()
    result = ml_equivalence_suite(trials=1000, ps=(0.05, 0.2), n=16, k=11)
    elapsed = time.perf_counter() - started
    verdict(5, result.passed and elapsed < 60, f"{result.detail}, runtime {elapsed:.1f}s (< 60 s)")


def test_criterion_06_query_count_beyond_capacity():
    started = time.perf_counter()
    code = sample_rlc(16, 11, 5)
    row = run_point(code, BscNoise(0.2), None, 1000, 1)
    elapsed = time.perf_counter() - started
    mean = row.mean_queries
    ok = 2**4 <= mean <= 2**6 and elapsed < 60
    verdict(6, ok, f"[16,11] p=0.2 mean unbounded queries {mean:.2f} in [16, 64], runtime {elapsed:.1f}s (< 60 s)")


def test_criterion_07_abandonment_preserves_bler(fig2_rows):
    config, rows, elapsed = fig2_rows
    by = {(r.p, r.a): r for r in rows}
    worst = 0.0
    below_ok = True
    below = [p for p in config.p_grid if p < P_CAP]
    for p in below:
        full, cut = by[(p, None)], by[(p, 12)]
        se = max(full.bler_se, cut.bler_se)
        diff = abs(full.bler - cut.bler)
        worst = max(worst, diff / se if se else (0.0 if diff == 0 else math.inf))
        below_ok &= diff <= 2 * se
    above = [p for p in config.p_grid if p > P_CAP]
    exps = [4, 6, 8, 10, 12, None]
    reduced = all(
        np.all(np.diff([by[(p, a)].mean_queries for a in exps]) > 0) for p in above
    )
    ok = below_ok and reduced and config.trials_per_point >= 1000 and elapsed < 900
    verdict(7, ok, f"{len(below)} below-capacity points, max |BLER(a=12) - BLER(unbounded)| = {worst:.2f} SE (<= 2); "
                   f"mean queries strictly increasing in a at {len(above)} beyond-capacity points: {reduced}; "
                   f"{config.trials_per_point} trials/point, runtime {elapsed:.1f}s (< 900 s)")


def test_criterion_08_conditional_success_region():
    started = time.perf_counter()
    code = sample_rlc(128, 116, 1)
    inside = [float(p) for p in np.geomspace(P_CAP, P_MIN_CAP, 5)[1:-1]]
    outside = [0.08, 0.1]
    found = []
    for i, p in enumerate(inside):
        profile = confidence_profile(code, BscNoise(p), 1000, 21, i)
        good = [r.a for r in profile if r.cond_success_prob is not None and r.cond_success_prob >= 0.5 and r.frac_decoded > 0]
        found.append(max(good) if good else None)
    spurious = []
    for j, p in enumerate(outside):
        profile = confidence_profile(code, BscNoise(p), 1000, 21, 10 + j)
        spurious += [(p, r.a) for r in profile if r.cond_success_prob is not None and r.cond_success_prob >= 0.5]
    elapsed = time.perf_counter() - started
    ok = all(a is not None for a in found) and not spurious and elapsed < 1200
    verdict(8, ok, f"largest qualifying a at p={['%.4f' % p for p in inside]}: {found}; "
                   f"beyond min-capacity p={outside} qualifying (p, a): {spurious or 'none'}; runtime {elapsed:.1f}s (< 1200 s)")


def test_criterion_09_threshold_correspondence():
    started = time.perf_counter()
    checks = []
    for n, k, grid in ((128, 116, np.geomspace(P_CAP, P_MIN_CAP, 7)[1:-1]),
                       (192, 174, np.geomspace(P_CAP, P_MIN_CAP, 5)[1:-1])):
        for row in cli.thresholds_table(n, k, [float(p) for p in grid], 1000, 11, 1):
            theory = row["n_g_star_theory"]
            emp = row["a_empirical_50pct"]
            gap = math.inf if theory is None or emp is None else abs(emp - round(theory))
            checks.append((n, round(row["p"], 4), None if theory is None else round(theory, 2), emp, gap))
    elapsed = time.perf_counter() - started
    worst = max(c[-1] for c in checks)
    ok = worst <= 2 and len(checks) == 8 and elapsed < 2700
    detail = "; ".join(f"n={n} p={p} theory={t} empirical={e}" for n, p, t, e, _ in checks)
    verdict(9, ok, f"max |a_emp - round(n g*)| = {worst} (<= 2) over 8 points, 1000 trials; {detail}; runtime {elapsed:.1f}s (< 2700 s)")


def test_criterion_10_property_suites(fig2_rows, tmp_path):
    started = time.perf_counter()
    rng = np.random.default_rng(77)
    models = [BscNoise(float(p)) for p in rng.uniform(0.01, 0.49, 20)]
    models += [MarkovNoise(((1 - a, a), (b, 1 - b))) for a, b in rng.uniform(0.03, 0.97, (20, 2))]
    zero = all(guesswork_scgf(m, 0.0) == 0.0 for m in models)
    convex = True
    for m in models:
        for _ in range(10):
            a, b = rng.uniform(-3, 20, 2)
            t = rng.uniform()
            lhs = guesswork_scgf(m, t * a + (1 - t) * b)
            rhs = t * guesswork_scgf(m, a) + (1 - t) * guesswork_scgf(m, b)
            convex &= lhs <= rhs + 1e-9 * (1 + abs(rhs))
    at_entropy = max(abs(rate_function(m, shannon_entropy_rate(m)).value) for m in models)
    nonneg = all(rate_function(m, g).value >= 0 for m in models for g in np.linspace(0, 1, 11))

    _, rows, _ = fig2_rows
    algebra = True
    for r in rows:
        algebra &= r.successes + r.wrong + r.abandoned == r.trials
        algebra &= r.bler == 1 - r.success_prob
        if r.cond_success_prob is not None:
            algebra &= abs(r.cond_success_prob * r.frac_decoded - r.success_prob) <= 1e-12

    cfg = tmp_path / "rerun.cfg"
    cfg.write_text("name = rerun\nn = 32\nk = 24\np_grid = 0.01, 0.05, 0.1\n"
                   "abandonment_exponents = 3, 6, unbounded\ntrials_per_point = 300\nmaster_seed = 8\n")
    assert cli.main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "a"), "--svg", "false"]) == 0
    assert cli.main(["simulate", "--config", str(tmp_path / "a" / "rerun.manifest"),
                     "--out", str(tmp_path / "b"), "--svg", "false"]) == 0
    rerun = (tmp_path / "a" / "rerun.csv").read_bytes() == (tmp_path / "b" / "rerun.csv").read_bytes()
    elapsed = time.perf_counter() - started
    ok = zero and convex and at_entropy <= 1e-9 and nonneg and algebra and rerun and elapsed < 120
    verdict(10, ok, f"Lambda(0)=0: {zero}; convexity: {convex}; max |I(H)| = {at_entropy:.1e}; I >= 0: {nonneg}; "
                    f"counter identities on {len(rows)} rows: {algebra}; byte-identical rerun: {rerun}; runtime {elapsed:.1f}s (< 120 s)")
