"""Binary linear codes: random systematic construction, encoding, syndromes.

Matrices are ``uint8`` 0/1 arrays. Each parity-check column is also kept
packed as an integer (bit ``i`` = row ``i`` of ``Hc``), so the syndrome of a
vector is the XOR of the packed columns at its set positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LinearCode",
    "sample_rlc",
    "code_from_generator",
    "encode",
    "syndrome",
    "syndrome_int",
    "is_codeword",
    "write_code",
    "read_code",
    "gf2_rank",
]


@dataclass(frozen=True, eq=False)
class LinearCode:
    n: int
    k: int
    G: np.ndarray
    Hc: np.ndarray
    columns: tuple = field(repr=False, default=())

    def __post_init__(self):
        G = np.asarray(self.G, dtype=np.uint8) & 1
        Hc = np.asarray(self.Hc, dtype=np.uint8) & 1
        if not (1 <= self.k < self.n):
            raise ValueError(f"need 1 <= k < n, got n={self.n}, k={self.k}")
        if G.shape != (self.k, self.n) or Hc.shape != (self.n - self.k, self.n):
            raise ValueError("generator / parity-check shapes do not match (n, k)")
        if np.any((G.astype(np.int64) @ Hc.T.astype(np.int64)) % 2):
            raise ValueError("G Hc^T must vanish over GF(2)")
        G.setflags(write=False)
        Hc.setflags(write=False)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "Hc", Hc)
        cols = tuple(int(sum(int(b) << i for i, b in enumerate(Hc[:, j]))) for j in range(self.n))
        object.__setattr__(self, "columns", cols)

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def redundancy(self) -> int:
        return self.n - self.k

    def column_syndromes(self) -> np.ndarray:
        """Packed parity-check columns as ``int64`` (requires ``n - k <= 62``)."""
        if self.redundancy > 62:
            raise ValueError("packed int64 syndromes need n - k <= 62")
        return np.array(self.columns, dtype=np.int64)

    def __eq__(self, other):
        return (
            isinstance(other, LinearCode)
            and self.n == other.n
            and self.k == other.k
            and np.array_equal(self.G, other.G)
            and np.array_equal(self.Hc, other.Hc)
        )

    def __hash__(self):
        return hash((self.n, self.k, self.G.tobytes()))


def sample_rlc(n: int, k: int, stream) -> LinearCode:
    """Random systematic code ``G = [I_k | P]``, ``Hc = [P^T | I_{n-k}]``."""
    if not (1 <= k < n):
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    rng = stream if isinstance(stream, np.random.Generator) else np.random.default_rng(stream)
    P = rng.integers(0, 2, size=(k, n - k), dtype=np.uint8)
    G = np.hstack([np.eye(k, dtype=np.uint8), P])
    Hc = np.hstack([P.T, np.eye(n - k, dtype=np.uint8)])
    return LinearCode(n, k, G, Hc)


def _check_len(v, n):
    v = np.asarray(v, dtype=np.uint8)
    if v.ndim != 1 or v.size != n:
        raise ValueError(f"expected a bit vector of length {n}, got shape {v.shape}")
    return v


def encode(code: LinearCode, u) -> np.ndarray:
    u = _check_len(u, code.k)
    return ((u.astype(np.int64) @ code.G) % 2).astype(np.uint8)


def syndrome(code: LinearCode, v) -> np.ndarray:
    v = _check_len(v, code.n)
    return ((code.Hc.astype(np.int64) @ v) % 2).astype(np.uint8)


def syndrome_int(code: LinearCode, v) -> int:
    """Syndrome packed as an int: XOR of the columns at set positions."""
    v = _check_len(v, code.n)
    s = 0
    cols = code.columns
    for j in np.flatnonzero(v):
        s ^= cols[j]
    return s


def is_codeword(code: LinearCode, v) -> bool:
    return syndrome_int(code, v) == 0


def gf2_rank(m) -> int:
    a = np.array(m, dtype=np.uint8) & 1
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        pivot = np.flatnonzero(a[rank:, c])
        if pivot.size == 0:
            continue
        p = rank + pivot[0]
        a[[rank, p]] = a[[p, rank]]
        others = np.flatnonzero(a[:, c])
        others = others[others != rank]
        a[others] ^= a[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def _null_space(G: np.ndarray) -> np.ndarray:
    """Basis of ``{h : G h^T = 0}`` over GF(2), as rows."""
    a = G.copy() & 1
    k, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        idx = np.flatnonzero(a[r:, c])
        if idx.size == 0:
            continue
        p = r + idx[0]
        a[[r, p]] = a[[p, r]]
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        a[others] ^= a[r]
        pivots.append(c)
        r += 1
        if r == k:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = a[row, f]
    return basis


def code_from_generator(G) -> LinearCode:
    """Build a code from any full-rank generator; Hc spans its null space."""
    G = np.asarray(G, dtype=np.uint8) & 1
    k, n = G.shape
    if gf2_rank(G) != k:
        raise ValueError("generator matrix is not full rank over GF(2)")
    return LinearCode(n, k, G, _null_space(G))


def write_code(code: LinearCode, path) -> None:
    lines = [f"{code.n} {code.k}"]
    lines += ["".join(str(int(b)) for b in row) for row in code.G]
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def read_code(path) -> LinearCode:
    with open(path) as f:
        rows = [line.strip() for line in f if line.strip()]
    try:
        n, k = (int(x) for x in rows[0].split())
    except (ValueError, IndexError):
        raise ValueError(f"{path}: first line must be 'n k'") from None
    body = rows[1:]
    if len(body) != k or any(len(r) != n or set(r) - {"0", "1"} for r in body):
        raise ValueError(f"{path}: expected {k} rows of {n} characters from {{0,1}}")
    G = np.array([[int(ch) for ch in r] for r in body], dtype=np.uint8)
    return code_from_generator(G)
