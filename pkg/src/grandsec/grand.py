"""Hard-detection GRAND with abandonment, and an exhaustive ML oracle.

:func:`grand_decode` is the query loop itself: noise effects are taken in
non-increasing likelihood order and ``y xor z`` is tested for code-book
membership until a hit or until ``max_queries`` tests have failed.

:class:`QueryTable` precomputes, once per (code, noise model), the rank of
the first effect in query order that lands in each syndrome coset. GRAND's
answer depends on ``y`` only through its syndrome, so a table lookup returns
exactly what the query loop would, which is what makes large Monte Carlo
sweeps affordable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .code import LinearCode, syndrome_int
from .noise import (
    BscNoise,
    NoiseModel,
    batch_log2_likelihood,
    bits_to_mask,
    bsc_error_positions,
    mask_to_bits,
    ordered_noise_effects,
)

__all__ = [
    "DecodeResult",
    "grand_decode",
    "ml_decode_exhaustive",
    "QueryTable",
    "bsc_rank",
]

DECODED = "decoded"
ABANDONED = "abandoned"
ML_MAX_K = 24
DENSE_TABLE_BITS = 24
TABLE_CAP = 2**23


@dataclass(frozen=True)
class DecodeResult:
    status: str
    queries: int
    codeword: Optional[np.ndarray] = None
    noise_effect: Optional[np.ndarray] = None

    @property
    def decoded(self) -> bool:
        return self.status == DECODED


def _check_max_queries(max_queries):
    if max_queries is not None and max_queries < 1:
        raise ValueError("max_queries must be >= 1 or None (unbounded)")


def _decoded(y, z, queries):
    z = np.asarray(z, dtype=np.uint8)
    return DecodeResult(DECODED, queries, y ^ z, z)


def grand_decode(code: LinearCode, model: NoiseModel, y, max_queries: Optional[int] = None) -> DecodeResult:
    """Decode ``y`` by guessing noise effects in likelihood order.

    ``max_queries=None`` means unbounded; otherwise the decoder abandons after
    exactly ``max_queries`` failed membership tests. The successful query is
    counted, so a decoded result's ``queries`` equals the guesswork rank of
    its noise effect.
    """
    y = np.asarray(y, dtype=np.uint8)
    if y.ndim != 1 or y.size != code.n:
        raise ValueError(f"received word must have length {code.n}, got shape {y.shape}")
    _check_max_queries(max_queries)
    target = syndrome_int(code, y)
    n = code.n
    queries = 0
    if isinstance(model, BscNoise):
        cols = code.columns
        for positions in bsc_error_positions(n):
            queries += 1
            s = 0
            for j in positions:
                s ^= cols[j]
            if s == target:
                z = np.zeros(n, dtype=np.uint8)
                z[list(positions)] = 1
                return _decoded(y, z, queries)
            if queries == max_queries:
                return DecodeResult(ABANDONED, queries)
    else:
        for effect in ordered_noise_effects(model, n):
            queries += 1
            if syndrome_int(code, effect.bits) == target:
                return _decoded(y, effect.bits, queries)
            if queries == max_queries:
                return DecodeResult(ABANDONED, queries)
    raise AssertionError("query order exhausted without reaching a codeword")


def ml_decode_exhaustive(code: LinearCode, model: NoiseModel, y):
    """Maximum-likelihood decoding by scanning all ``2**k`` codewords.

    Returns ``(codeword, log2 likelihood of y xor codeword)``. Among equally
    likely noise effects the one earliest in query order (smallest packed
    mask) wins.
    """
    if code.k > ML_MAX_K:
        raise ValueError(f"exhaustive ML oracle refuses k={code.k} > {ML_MAX_K}")
    y = np.asarray(y, dtype=np.uint8)
    if y.size != code.n:
        raise ValueError(f"received word must have length {code.n}")
    G = code.G.astype(np.int64)
    best = None
    chunk = 1 << 14
    for start in range(0, 1 << code.k, chunk):
        msgs = np.arange(start, min(start + chunk, 1 << code.k), dtype=np.int64)
        u = (msgs[:, None] >> np.arange(code.k)) & 1
        cw = ((u @ G) % 2).astype(np.uint8)
        z = cw ^ y
        ll = batch_log2_likelihood(model, z)
        top = np.flatnonzero(ll == ll.max())
        # smallest packed mask = lexicographically smallest from the highest position down
        order = np.lexsort(z[top].T)
        i = top[order[0]]
        cand = (float(ll[i]), z[i], cw[i])
        if best is None or cand[0] > best[0] or (
            cand[0] == best[0] and bits_to_mask(cand[1]) < bits_to_mask(best[1])
        ):
            best = cand
    return best[2].copy(), best[0]


def bsc_rank(positions, n: int) -> int:
    """0-based query rank of a BSC pattern given its sorted flipped positions."""
    w = len(positions)
    rank = sum(math.comb(n, i) for i in range(w))
    return rank + sum(math.comb(c, j + 1) for j, c in enumerate(positions))


def _colex_array(n: int, w: int) -> np.ndarray:
    """All ``w``-subsets of ``range(n)`` as rows, in colex order."""
    if w == 0:
        return np.zeros((1, 0), dtype=np.int32)
    base = _colex_array(n, w - 1)
    blocks = []
    for top in range(w - 1, n):
        head = base[: math.comb(top, w - 1)]
        blocks.append(np.hstack([head, np.full((head.shape[0], 1), top, dtype=np.int32)]))
    return np.vstack(blocks)


class QueryTable:
    """First-hit query rank for every syndrome, over a prefix of query order.

    Parameters
    ----------
    code : LinearCode
    model : NoiseModel
    min_queries : int or None
        The table covers at least this many queries. ``None`` asks for the
        unbounded decoder; the table then covers a few times ``2**(n-k)``
        queries and any syndrome not reached falls back to continuing the
        query sequence past the table.
    """

    def __init__(self, code: LinearCode, model: NoiseModel, min_queries: Optional[int] = None):
        self.code = code
        self.model = model
        r = code.redundancy
        colsyn = code.column_syndromes()
        want = min_queries if min_queries is not None else 4 * 2**r
        if min_queries is not None and min_queries > TABLE_CAP:
            raise ValueError(f"query table capped at {TABLE_CAP} entries")
        want = min(want, TABLE_CAP)
        self._dense = r <= DENSE_TABLE_BITS
        self._first = np.full(2**r, -1, dtype=np.int64) if self._dense else {}
        self._bsc = isinstance(model, BscNoise)
        self.size = 0
        if self._bsc:
            self._weights = []
            w = 0
            while self.size < want and w <= code.n:
                count = math.comb(code.n, w)
                if min_queries is None and self.size + count > TABLE_CAP and self.size > 0:
                    break
                combos = _colex_array(code.n, w)
                syn = np.bitwise_xor.reduce(colsyn[combos], axis=1) if w else np.zeros(1, np.int64)
                self._absorb(syn)
                self._weights.append(combos)
                self.size += count
                w += 1
            self.max_weight = w - 1
        else:
            self._masks = []
            syns = []
            for effect in itertools.islice(ordered_noise_effects(model, code.n), want):
                self._masks.append(effect.mask)
                syns.append(syndrome_int(code, effect.bits))
            self._absorb(np.array(syns, dtype=np.int64))
            self.size = len(self._masks)
            self._rank = {m: i for i, m in enumerate(self._masks)}

    def _absorb(self, syn: np.ndarray):
        uniq, idx = np.unique(syn, return_index=True)
        idx = idx + self.size
        if self._dense:
            fresh = self._first[uniq] < 0
            self._first[uniq[fresh]] = idx[fresh]
        else:
            for s, i in zip(uniq.tolist(), idx.tolist()):
                self._first.setdefault(s, i)

    def first_hit(self, s: int) -> int:
        """0-based rank of the first query hitting syndrome ``s``; -1 if beyond the table."""
        if self._dense:
            return int(self._first[s])
        return self._first.get(s, -1)

    def pattern(self, index: int) -> np.ndarray:
        n = self.code.n
        if self._bsc:
            for combos in self._weights:
                if index < combos.shape[0]:
                    z = np.zeros(n, dtype=np.uint8)
                    z[combos[index]] = 1
                    return z
                index -= combos.shape[0]
            raise IndexError("index beyond the table")
        return mask_to_bits(self._masks[index], n)

    def rank(self, z) -> int:
        """0-based query rank of noise effect ``z``; -1 if beyond the table."""
        z = np.asarray(z, dtype=np.uint8)
        if self._bsc:
            positions = np.flatnonzero(z)
            if positions.size > self.max_weight:
                return -1
            return bsc_rank(positions.tolist(), self.code.n)
        return self._rank.get(bits_to_mask(z), -1)

    def search_beyond(self, s: int):
        """Continue the query order past the table; returns ``(rank, z)``."""
        n = self.code.n
        index = self.size
        if self._bsc:
            cols = self.code.columns
            for positions in bsc_error_positions(n, self.max_weight + 1):
                acc = 0
                for j in positions:
                    acc ^= cols[j]
                if acc == s:
                    z = np.zeros(n, dtype=np.uint8)
                    z[list(positions)] = 1
                    return index, z
                index += 1
        else:
            for effect in itertools.islice(ordered_noise_effects(self.model, n), self.size, None):
                if syndrome_int(self.code, effect.bits) == s:
                    return index, effect.bits
                index += 1
        raise AssertionError("query order exhausted without reaching a codeword")

    def decode(self, y, max_queries: Optional[int] = None) -> DecodeResult:
        """Same contract and result as :func:`grand_decode`."""
        y = np.asarray(y, dtype=np.uint8)
        _check_max_queries(max_queries)
        s = syndrome_int(self.code, y)
        f = self.first_hit(s)
        if f < 0:
            if max_queries is not None and max_queries <= self.size:
                return DecodeResult(ABANDONED, max_queries)
            f, z = self.search_beyond(s)
        else:
            z = None
        if max_queries is not None and f >= max_queries:
            return DecodeResult(ABANDONED, max_queries)
        if z is None:
            z = self.pattern(f)
        return _decoded(y, z, f + 1)
