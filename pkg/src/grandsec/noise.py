"""Binary additive noise models.

Two models are supported: the binary symmetric channel (:class:`BscNoise`)
and a two-state Markov burst process (:class:`MarkovNoise`) whose state is
the emitted noise bit. Noise vectors are ``uint8`` arrays of 0/1 with
position 0 first. Where a pattern is packed into an integer, bit ``i`` of
the integer is position ``i``.

All probabilities are handled as base-2 logarithms.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterator, Union

import numpy as np

__all__ = [
    "BscNoise",
    "MarkovNoise",
    "NoiseModel",
    "NoiseEffect",
    "EnumerationBudgetExceeded",
    "DEFAULT_HEAP_CAP",
    "sample_noise",
    "noise_log2_likelihood",
    "ordered_noise_effects",
    "guesswork_distribution",
    "colex_combinations",
    "bits_to_mask",
    "mask_to_bits",
    "batch_log2_likelihood",
    "all_log2_likelihoods",
    "bsc_error_positions",
]

DEFAULT_HEAP_CAP = 2**22
MAX_ORACLE_LENGTH = 20


class EnumerationBudgetExceeded(RuntimeError):
    """The likelihood-ordered enumerator outgrew its heap cap."""


@dataclass(frozen=True)
class BscNoise:
    """Memoryless bit flips with probability ``p`` in (0, 0.5)."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if not (0.0 < p < 0.5):
            raise ValueError(f"bit-flip probability must lie in (0, 0.5), got {self.p!r}")
        object.__setattr__(self, "p", p)

    @property
    def log2_p(self) -> float:
        return math.log2(self.p)

    @property
    def log2_q(self) -> float:
        return math.log1p(-self.p) / math.log(2)


@dataclass(frozen=True)
class MarkovNoise:
    """Two-state Markov noise; the chain state is the noise bit.

    The initial state ``X_0 ~ pi0`` is not emitted: the noise bits are the
    states ``X_1 .. X_n``, so the first bit is distributed as ``pi0 @ t``.
    ``emission`` is the per-state probability of emitting a 1 and is fixed to
    the identity map ``(0.0, 1.0)``.
    """

    t: tuple
    pi0: tuple = (1.0, 0.0)
    emission: tuple = field(default=(0.0, 1.0))

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        pi0 = np.asarray(self.pi0, dtype=float)
        if t.shape != (2, 2):
            raise ValueError(f"transition matrix must be 2x2, got shape {t.shape}")
        if np.any(t < 0) or np.any(t > 1):
            raise ValueError("transition probabilities must lie in [0, 1]")
        if np.any(np.abs(t.sum(axis=1) - 1.0) > 1e-12):
            raise ValueError("transition matrix rows must sum to 1")
        if pi0.shape != (2,) or np.any(pi0 < 0) or abs(pi0.sum() - 1.0) > 1e-12:
            raise ValueError("pi0 must be a probability vector over two states")
        if tuple(float(e) for e in self.emission) != (0.0, 1.0):
            raise ValueError("only the identity emission (0.0, 1.0) is supported")
        object.__setattr__(self, "t", tuple(tuple(float(v) for v in row) for row in t))
        object.__setattr__(self, "pi0", tuple(float(v) for v in pi0))
        object.__setattr__(self, "emission", (0.0, 1.0))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.t)

    def first_bit_probs(self) -> np.ndarray:
        return np.asarray(self.pi0) @ self.matrix


NoiseModel = Union[BscNoise, MarkovNoise]


@dataclass(frozen=True)
class NoiseEffect:
    bits: np.ndarray
    log2_prob: float

    @property
    def mask(self) -> int:
        return bits_to_mask(self.bits)


def bits_to_mask(bits) -> int:
    """Pack a 0/1 vector into an int with bit ``i`` = position ``i``."""
    bits = np.asarray(bits, dtype=np.uint8)
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def mask_to_bits(mask: int, n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    raw = np.frombuffer(int(mask).to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].copy()


def _log2(x: float) -> float:
    return math.log2(x) if x > 0 else -math.inf


def _as_rng(stream) -> np.random.Generator:
    if isinstance(stream, np.random.Generator):
        return stream
    return np.random.default_rng(stream)


def sample_noise(model: NoiseModel, n: int, stream) -> np.ndarray:
    """Draw one length-``n`` noise vector from ``model``.

    ``stream`` is a :class:`numpy.random.Generator` (advanced in place) or
    anything :func:`numpy.random.default_rng` accepts.
    """
    if n < 1:
        raise ValueError("noise length must be at least 1")
    rng = _as_rng(stream)
    u = rng.random(n)
    if isinstance(model, BscNoise):
        return (u < model.p).astype(np.uint8)
    t = model.t
    out = np.empty(n, dtype=np.uint8)
    # the hidden X_0 is drawn first, then n emitted transitions
    state = 0 if rng.random() < model.pi0[0] else 1
    for i in range(n):
        state = 1 if u[i] < t[state][1] else 0
        out[i] = state
    return out


def noise_log2_likelihood(model: NoiseModel, z) -> float:
    z = np.asarray(z, dtype=np.uint8)
    n = z.size
    if n == 0:
        raise ValueError("noise vector must be nonempty")
    if isinstance(model, BscNoise):
        w = int(z.sum())
        return w * model.log2_p + (n - w) * model.log2_q
    q1 = model.first_bit_probs()
    total = _log2(float(q1[z[0]]))
    t = model.t
    for prev, cur in zip(z[:-1], z[1:]):
        total += _log2(t[prev][cur])
    return total


def colex_combinations(n: int, w: int) -> Iterator[tuple]:
    """Yield ``w``-subsets of ``range(n)`` in colexicographic order.

    Colex order on position sets equals numeric order of their packed masks.
    """
    if w == 0:
        yield ()
        return
    if w > n:
        return
    c = list(range(w))
    while True:
        yield tuple(c)
        j = 0
        while j < w - 1 and c[j] + 1 == c[j + 1]:
            j += 1
        if j == w - 1 and c[j] + 1 >= n:
            return
        c[j] += 1
        for i in range(j):
            c[i] = i


def bsc_error_positions(n: int, start_weight: int = 0) -> Iterator[tuple]:
    """Flipped-position tuples in BSC query order: by weight, then colex."""
    for w in range(start_weight, n + 1):
        yield from colex_combinations(n, w)


def ordered_noise_effects(model: NoiseModel, n: int, heap_cap: int = DEFAULT_HEAP_CAP) -> Iterator[NoiseEffect]:
    """Yield all ``2**n`` noise effects in non-increasing likelihood order.

    Ties are broken by ascending packed mask. The j-th item (1-based) is the
    guesswork of that effect.
    """
    if n < 1:
        raise ValueError("noise length must be at least 1")
    if isinstance(model, BscNoise):
        for positions in bsc_error_positions(n):
            bits = np.zeros(n, dtype=np.uint8)
            bits[list(positions)] = 1
            w = len(positions)
            yield NoiseEffect(bits, w * model.log2_p + (n - w) * model.log2_q)
        return
    yield from _markov_best_first(model, n, heap_cap)


def _markov_best_first(model: MarkovNoise, n: int, heap_cap: int) -> Iterator[NoiseEffect]:
    t = model.t
    lt = [[_log2(t[i][j]) for j in range(2)] for i in range(2)]
    first = [_log2(float(v)) for v in model.first_bit_probs()]
    step = max(max(row) for row in lt)
    # slack keeps the bound admissible against summation rounding
    slack = 1e-9

    def bound(remaining: int) -> float:
        return remaining * step + (slack * remaining if remaining else 0.0)

    # entries: (-priority, kind, mask, length, log2p, last); kind 0 = prefix, 1 = complete
    heap = []
    for b in (0, 1):
        lp = first[b]
        if n == 1:
            heap.append((-lp, 1, b, 1, lp, b))
        else:
            heap.append((-(lp + bound(n - 1)), 0, b, 1, lp, b))
    heapq.heapify(heap)
    while heap:
        _, kind, mask, length, lp, last = heapq.heappop(heap)
        if kind == 1:
            yield NoiseEffect(mask_to_bits(mask, n), lp)
            continue
        for b in (0, 1):
            clp = lp + lt[last][b]
            cmask = mask | (b << length)
            if length + 1 == n:
                heapq.heappush(heap, (-clp, 1, cmask, n, clp, b))
            else:
                heapq.heappush(heap, (-(clp + bound(n - length - 1)), 0, cmask, length + 1, clp, b))
        if len(heap) > heap_cap:
            raise EnumerationBudgetExceeded(
                f"enumeration budget exhausted: heap exceeded {heap_cap} entries at n={n}"
            )


def batch_log2_likelihood(model: NoiseModel, z) -> np.ndarray:
    """Row-wise :func:`noise_log2_likelihood` for a 2-D 0/1 array.

    Terms are summed in the same order as the scalar version, so results
    agree bit-for-bit.
    """
    z = np.asarray(z, dtype=np.int64)
    n = z.shape[1]
    if isinstance(model, BscNoise):
        w = z.sum(axis=1)
        return w * model.log2_p + (n - w) * model.log2_q
    with np.errstate(divide="ignore"):
        lt = np.log2(model.matrix)
        first = np.log2(model.first_bit_probs())
    out = first[z[:, 0]]
    for i in range(1, n):
        out = out + lt[z[:, i - 1], z[:, i]]
    return out


def all_log2_likelihoods(model: NoiseModel, n: int) -> np.ndarray:
    """Log2-probabilities of every length-``n`` sequence, indexed by packed mask."""
    if n > MAX_ORACLE_LENGTH:
        raise ValueError(f"exhaustive enumeration refused for n={n} > {MAX_ORACLE_LENGTH}")
    masks = np.arange(2**n, dtype=np.int64)
    return batch_log2_likelihood(model, (masks[:, None] >> np.arange(n)) & 1)


def guesswork_distribution(model: NoiseModel, n: int) -> np.ndarray:
    """All ``2**n`` sequence probabilities in non-increasing order."""
    if n < 1:
        raise ValueError("noise length must be at least 1")
    if n > MAX_ORACLE_LENGTH:
        raise ValueError(
            f"guesswork distribution is an oracle for n <= {MAX_ORACLE_LENGTH}; refusing n={n}"
        )
    if isinstance(model, BscNoise):
        w = np.arange(n + 1)
        probs = np.exp2(w * model.log2_p + (n - w) * model.log2_q)
        counts = [math.comb(n, int(i)) for i in w]
        return np.repeat(probs, counts)
    return np.sort(np.exp2(all_log2_likelihoods(model, n)))[::-1]
