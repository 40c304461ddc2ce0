"""Brute-force validation suites, run by ``grandsec oracle-check``.

Each suite compares a fast path against an exhaustive computation at small
scale and returns a :class:`SuiteResult`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .code import encode, sample_rlc
from .exponents import guesswork_scgf, min_entropy_rate, rate_function
from .grand import grand_decode, ml_decode_exhaustive
from .noise import BscNoise, guesswork_distribution, noise_log2_likelihood, sample_noise

MOMENT_TOL = 0.05
CONJUGATE_TOL = 1e-6


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def normalized_moment(model, n: int, alpha: float) -> float:
    """Exact ``(1/n) log2 E[G(N^n)^alpha]`` from the sorted sequence probabilities."""
    probs = guesswork_distribution(model, n)
    ranks = np.arange(1, probs.size + 1, dtype=float)
    return float(np.log2(np.sum(probs * ranks**alpha)) / n)


def trend_decreasing(values) -> bool:
    """Least-squares slope of ``values`` against their index is negative."""
    x = np.arange(len(values), dtype=float)
    return bool(np.polyfit(x, np.asarray(values, dtype=float), 1)[0] < 0)


def moment_suite(ps=(0.1, 0.25), alphas=(0.5, 1.0, 2.0), lengths=range(8, 17), tol=MOMENT_TOL) -> SuiteResult:
    worst = 0.0
    ok = True
    notes = []
    for p in ps:
        model = BscNoise(p)
        for alpha in alphas:
            target = guesswork_scgf(model, alpha)
            gaps = [abs(normalized_moment(model, n, alpha) - target) for n in lengths]
            final = gaps[-1]
            worst = max(worst, final)
            if final > tol or not trend_decreasing(gaps):
                ok = False
                notes.append(f"p={p} alpha={alpha} gap={final:.4f}")
    detail = f"max gap at n={list(lengths)[-1]} is {worst:.4f} (tol {tol})"
    if notes:
        detail += "; " + ", ".join(notes)
    return SuiteResult("guesswork-moment", ok, detail)


def dense_grid_rate(model, g: float, alpha_hi: float = 64.0, step: float = 1e-4) -> float:
    """``max_alpha {g alpha - Lambda(alpha)}`` over a uniform grid plus the ``alpha <= -1`` branch."""
    alphas = np.arange(-1.0 + step, alpha_hi + step / 2, step)
    if isinstance(model, BscNoise):
        p = model.p
        q = 1.0 - p
        beta = 1.0 / (1.0 + alphas)
        lam = np.log2(q) + (1.0 + alphas) * np.log2(1.0 + (p / q) ** beta)
    else:
        lam = np.array([guesswork_scgf(model, a) for a in alphas])
    best = float(np.max(g * alphas - lam))
    return max(best, min_entropy_rate(model) - g)


def conjugate_suite(pairs: int = 50, seed: int = 2024, tol=CONJUGATE_TOL) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(pairs):
        p = float(rng.uniform(0.01, 0.49))
        g = float(rng.uniform(0.0, 0.95))
        model = BscNoise(p)
        worst = max(worst, abs(rate_function(model, g).value - dense_grid_rate(model, g)))
    return SuiteResult("conjugate-oracle", worst <= tol, f"max |I - grid| = {worst:.2e} over {pairs} pairs (tol {tol})")


def ml_equivalence_suite(trials: int = 1000, ps=(0.05, 0.2), n: int = 16, k: int = 11, seed: int = 5) -> SuiteResult:
    code = sample_rlc(n, k, seed)
    rng = np.random.default_rng(seed + 1)
    mismatches = 0
    for p in ps:
        model = BscNoise(p)
        for _ in range(trials):
            x = encode(code, rng.integers(0, 2, k, dtype=np.uint8))
            y = x ^ sample_noise(model, n, rng)
            result = grand_decode(code, model, y)
            _, best = ml_decode_exhaustive(code, model, y)
            if noise_log2_likelihood(model, result.noise_effect) != best:
                mismatches += 1
    return SuiteResult(
        "ml-equivalence",
        mismatches == 0,
        f"[{n},{k}] code, p in {list(ps)}, {trials} trials each: {mismatches} likelihood mismatches",
    )


def run_all(trials: int = 1000) -> list:
    return [ml_equivalence_suite(trials), moment_suite(), conjugate_suite()]
