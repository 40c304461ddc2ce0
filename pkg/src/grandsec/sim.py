"""Monte Carlo eavesdropper experiments over random linear codes.

Each trial draws a uniform message, encodes it, adds channel noise and runs
GRAND. Trials are seeded independently from ``(seed, point_index, trial)``
so results do not depend on execution order. One batch of trials at a
channel point serves every abandonment threshold: GRAND with budget ``2**a``
decodes iff the first hit's rank is below ``2**a``, so all thresholds are
read off the same first-hit ranks.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .code import LinearCode, encode, sample_rlc, syndrome_int
from .exponents import stationary_distribution
from .grand import QueryTable
from .noise import BscNoise, EnumerationBudgetExceeded, MarkovNoise, NoiseModel, sample_noise

__all__ = [
    "SweepConfig",
    "PointAggregate",
    "TrialOutcomes",
    "trial_rng",
    "simulate_trials",
    "aggregate",
    "run_point",
    "run_sweep",
    "confidence_profile",
    "empirical_confidence_threshold",
]

ABANDONMENT_NOTE = (
    "abandon after exactly 2^a failed membership queries; "
    "queries count the successful query; abandoned trials contribute 2^a queries"
)


@dataclass(frozen=True)
class SweepConfig:
    n: int
    k: int
    p_grid: tuple
    abandonment_exponents: tuple = (None,)
    trials_per_point: int = 1000
    master_seed: int = 1
    code_seed: int = 1
    noise_kind: str = "bsc"
    markov_t: Optional[tuple] = None
    markov_pi0: tuple = (1.0, 0.0)
    name: str = "sweep"

    def __post_init__(self):
        if not (1 <= self.k < self.n):
            raise ValueError(f"need 1 <= k < n, got n={self.n}, k={self.k}")
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be >= 1")
        if self.noise_kind not in ("bsc", "markov"):
            raise ValueError(f"noise_kind must be 'bsc' or 'markov', got {self.noise_kind!r}")
        if self.noise_kind == "bsc":
            if not self.p_grid:
                raise ValueError("p_grid is empty")
            for p in self.p_grid:
                if not (0.0 < p < 0.5):
                    raise ValueError(f"p_grid value {p} outside (0, 0.5)")
        elif self.markov_t is None:
            raise ValueError("markov noise needs markov_t")
        if not self.abandonment_exponents:
            raise ValueError("abandonment_exponents is empty")
        for a in self.abandonment_exponents:
            if a is not None and not (1 <= a <= self.n - self.k):
                raise ValueError(f"abandonment exponent {a} outside [1, n-k={self.n - self.k}]")

    def models(self) -> list:
        """``(p, model)`` per channel point; Markov reports its stationary flip rate."""
        if self.noise_kind == "bsc":
            return [(float(p), BscNoise(p)) for p in self.p_grid]
        model = MarkovNoise(self.markov_t, self.markov_pi0)
        return [(float(stationary_distribution(model.matrix)[1]), model)]

    def code(self) -> LinearCode:
        return sample_rlc(self.n, self.k, self.code_seed)


@dataclass(frozen=True)
class PointAggregate:
    p: float
    a: Optional[int]
    trials: int
    successes: int
    wrong: int
    abandoned: int
    total_queries: int
    failure: Optional[str] = None

    @property
    def decoded(self) -> int:
        return self.successes + self.wrong

    @property
    def max_queries(self) -> Optional[int]:
        return None if self.a is None else 2**self.a

    @property
    def bler(self) -> Optional[float]:
        return 1.0 - self.successes / self.trials if self.trials else None

    @property
    def success_prob(self) -> Optional[float]:
        return self.successes / self.trials if self.trials else None

    @property
    def cond_success_prob(self) -> Optional[float]:
        return self.successes / self.decoded if self.decoded else None

    @property
    def frac_decoded(self) -> Optional[float]:
        return self.decoded / self.trials if self.trials else None

    @property
    def mean_queries(self) -> Optional[float]:
        return self.total_queries / self.trials if self.trials else None

    @property
    def mean_queries_per_success(self) -> Optional[float]:
        return self.total_queries / self.successes if self.successes else None

    @staticmethod
    def _se(frac, count):
        if frac is None or not count:
            return None
        return math.sqrt(frac * (1 - frac) / count)

    @property
    def bler_se(self):
        return self._se(self.bler, self.trials)

    @property
    def success_prob_se(self):
        return self._se(self.success_prob, self.trials)

    @property
    def cond_success_prob_se(self):
        return self._se(self.cond_success_prob, self.decoded)

    @property
    def frac_decoded_se(self):
        return self._se(self.frac_decoded, self.trials)


@dataclass
class TrialOutcomes:
    """Per-trial first-hit rank (0-based) and whether that hit is the true noise.

    A rank of -1 means the first hit lies beyond ``table_size`` and was not
    resolved (only possible when no unbounded decoding was requested).
    """

    first: np.ndarray
    correct: np.ndarray
    table_size: int
    failure: Optional[str] = field(default=None)


def trial_rng(seed: int, point_index: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(point_index, trial)))


@lru_cache(maxsize=8)
def _query_table(code: LinearCode, model: NoiseModel, min_queries: Optional[int]) -> QueryTable:
    return QueryTable(code, model, min_queries)


def _coverage(exponents: Sequence[Optional[int]]) -> Optional[int]:
    if any(a is None for a in exponents):
        return None
    return 2 ** max(exponents)


def simulate_trials(
    code: LinearCode,
    model: NoiseModel,
    trials: int,
    seed: int,
    point_index: int = 0,
    max_queries: Optional[int] = None,
) -> TrialOutcomes:
    """Run ``trials`` transmissions and record each GRAND first-hit rank.

    ``max_queries`` is the largest budget any consumer needs; ``None``
    resolves every trial exactly (unbounded decoding).
    """
    try:
        table = _query_table(code, model, max_queries)
    except EnumerationBudgetExceeded as exc:
        return TrialOutcomes(np.zeros(0, np.int64), np.zeros(0, bool), 0, failure=str(exc))
    first = np.empty(trials, dtype=np.int64)
    correct = np.zeros(trials, dtype=bool)
    try:
        for t in range(trials):
            rng = trial_rng(seed, point_index, t)
            u = rng.integers(0, 2, code.k, dtype=np.uint8)
            x = encode(code, u)
            z = sample_noise(model, code.n, rng)
            y = x ^ z
            s = syndrome_int(code, y)
            f = table.first_hit(s)
            if f >= 0:
                correct[t] = f == table.rank(z)
            elif max_queries is None:
                f, zhat = table.search_beyond(s)
                correct[t] = np.array_equal(zhat, z)
            first[t] = f
    except EnumerationBudgetExceeded as exc:
        return TrialOutcomes(np.zeros(0, np.int64), np.zeros(0, bool), table.size, failure=str(exc))
    return TrialOutcomes(first, correct, table.size)


def aggregate(outcomes: TrialOutcomes, p: float, a: Optional[int]) -> PointAggregate:
    if outcomes.failure is not None:
        return PointAggregate(p, a, 0, 0, 0, 0, 0, failure=outcomes.failure)
    first = outcomes.first
    trials = first.size
    if a is None:
        if np.any(first < 0):
            raise ValueError("unbounded aggregate needs exactly resolved trials")
        decoded = np.ones(trials, dtype=bool)
        queries = first + 1
    else:
        budget = 2**a
        if budget > outcomes.table_size and np.any(first < 0):
            raise ValueError(f"trials were resolved only up to {outcomes.table_size} queries")
        decoded = (first >= 0) & (first < budget)
        queries = np.where(decoded, first + 1, budget)
    successes = int(np.count_nonzero(decoded & outcomes.correct))
    n_decoded = int(np.count_nonzero(decoded))
    return PointAggregate(
        p=p,
        a=a,
        trials=trials,
        successes=successes,
        wrong=n_decoded - successes,
        abandoned=trials - n_decoded,
        total_queries=int(queries.sum()),
    )


def run_point(
    code: LinearCode,
    model: NoiseModel,
    a: Optional[int],
    trials: int,
    seed: int,
    point_index: int = 0,
) -> PointAggregate:
    """Aggregate ``trials`` GRAND decodings with budget ``2**a`` (``None`` = unbounded)."""
    if a is not None and not (1 <= a <= code.redundancy):
        raise ValueError(f"abandonment exponent must lie in [1, {code.redundancy}]")
    p = model.p if isinstance(model, BscNoise) else float(stationary_distribution(model.matrix)[1])
    budget = None if a is None else 2**a
    outcomes = simulate_trials(code, model, trials, seed, point_index, budget)
    return aggregate(outcomes, p, a)


def _sweep_point(args):
    code, model, p, index, exponents, trials, seed = args
    outcomes = simulate_trials(code, model, trials, seed, index, _coverage(exponents))
    return [aggregate(outcomes, p, a) for a in exponents]


def _sort_key(row: PointAggregate):
    return (math.inf if row.a is None else row.a, row.p)


def run_sweep(config: SweepConfig, threads: int = 1, order: Optional[Sequence[int]] = None) -> list:
    """Evaluate every (p, a) pair; rows sorted by (a, p) with unbounded last.

    ``order`` permutes the evaluation order of channel points (results are
    unaffected); ``threads`` > 1 evaluates points in worker processes.
    """
    code = config.code()
    points = config.models()
    exponents = tuple(config.abandonment_exponents)
    jobs = [
        (code, model, p, i, exponents, config.trials_per_point, config.master_seed)
        for i, (p, model) in enumerate(points)
    ]
    if order is not None:
        jobs = [jobs[i] for i in order]
    if threads == 1 or len(jobs) == 1:
        results = [_sweep_point(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads or None) as pool:
            results = list(pool.map(_sweep_point, jobs))
    rows = [row for block in results for row in block]
    return sorted(rows, key=_sort_key)


def confidence_profile(code: LinearCode, model: NoiseModel, trials: int, seed: int, point_index: int = 0) -> list:
    """Aggregates for every ``a`` in ``1..n-k`` from one batch of trials."""
    p = model.p if isinstance(model, BscNoise) else float(stationary_distribution(model.matrix)[1])
    outcomes = simulate_trials(code, model, trials, seed, point_index, 2**code.redundancy)
    return [aggregate(outcomes, p, a) for a in range(1, code.redundancy + 1)]


def empirical_confidence_threshold(
    code: LinearCode,
    model: NoiseModel,
    target: float = 0.5,
    trials: int = 1000,
    seed: int = 0,
    point_index: int = 0,
) -> Optional[int]:
    """Largest ``a`` whose conditional success probability reaches ``target``.

    Every ``a`` in ``1..n-k`` is evaluated from the same trials, so the scan
    is exhaustive and needs no monotonicity assumption.
    """
    if not (0.0 < target < 1.0):
        raise ValueError("target must lie in (0, 1)")
    best = None
    for row in confidence_profile(code, model, trials, seed, point_index):
        cond = row.cond_success_prob
        if cond is not None and cond >= target:
            best = row.a
    return best
