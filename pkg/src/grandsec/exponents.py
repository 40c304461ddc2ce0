"""Success exponents for additive binary noise.

Rényi entropy rates, the guesswork scaled cumulant generating function
``Lambda(alpha)``, its Legendre-Fenchel transform ``I(g)``, capacity and
min-capacity, the success-probability estimate ``2**(-n I(1-R))`` and the
confident-query exponent ``g*``. Every rate is in bits per symbol.

For the BSC everything is closed form. For Markov noise the rates come from
the Perron root of the entrywise power ``T**beta`` of the transition matrix,
evaluated by power iteration, and from the maximum cycle mean of ``log2 T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .noise import BscNoise, MarkovNoise, NoiseModel

__all__ = [
    "RateFunctionResult",
    "ChannelSummary",
    "binary_entropy",
    "renyi_entropy_rate",
    "shannon_entropy_rate",
    "min_entropy_rate",
    "guesswork_scgf",
    "guesswork_scgf_derivative",
    "rate_function",
    "channel_summary",
    "success_probability_estimate",
    "confident_query_exponent",
    "capacity_point",
    "min_capacity_point",
]

ALPHA_MAX = 64.0
ALPHA_CAP = 2.0**20
POWER_TOL = 1e-12
POWER_MAX_SQUARINGS = 64
STRICT_MARGIN = 1e-12


@dataclass(frozen=True)
class RateFunctionResult:
    g: float
    value: float
    alpha_star: float
    bracket_width: float


@dataclass(frozen=True)
class ChannelSummary:
    shannon_entropy_rate: float
    min_entropy_rate: float
    capacity: float
    min_capacity: float


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


# -- Markov spectral helpers -------------------------------------------------

def _strongly_connected(adj: np.ndarray) -> bool:
    m = adj.shape[0]
    reach = (adj > 0) | np.eye(m, dtype=bool)
    for _ in range(m):
        reach = (reach.astype(int) @ reach.astype(int)) > 0
    return bool(reach.all())


def _check_irreducible(model: MarkovNoise):
    if not _strongly_connected(model.matrix):
        raise ValueError("Markov chain is reducible; no unique stationary distribution")


def max_cycle_mean(weights: np.ndarray) -> float:
    """Maximum mean weight over cycles of a weighted digraph (Karp).

    ``-inf`` entries mark missing edges.
    """
    m = weights.shape[0]
    d = np.full((m + 1, m), -np.inf)
    d[0] = 0.0
    for step in range(1, m + 1):
        d[step] = np.max(d[step - 1][:, None] + weights, axis=0)
    best = -np.inf
    for v in range(m):
        if d[m, v] == -np.inf:
            continue
        worst = np.inf
        for step in range(m):
            if d[step, v] == -np.inf:
                continue
            worst = min(worst, (d[m, v] - d[step, v]) / (m - step))
        best = max(best, worst)
    return float(best)


def _perron(a: np.ndarray):
    """Perron root and left/right vectors of a nonnegative matrix.

    Power iteration on the shifted matrix ``a + I`` (primitive even when ``a``
    is periodic), accelerated by repeated squaring: after ``m`` squarings the
    iterate is ``(a + I)**(2**m) 1``. Stops once the Collatz-Wielandt bounds
    agree to ``POWER_TOL`` or the left and right iterates stop moving.
    """
    m = a.shape[0]
    b = a + np.eye(m)
    b = b / b.max()
    v_old = u_old = None
    for _ in range(POWER_MAX_SQUARINGS):
        v = b @ np.ones(m)
        v /= v.max()
        u = np.ones(m) @ b
        u /= u.max()
        pos = v > 0
        ratios = np.full(m, np.nan)
        ratios[pos] = (a @ v)[pos] / v[pos]
        lo, hi = np.nanmin(ratios), np.nanmax(ratios)
        if hi - lo <= POWER_TOL * hi:
            return 0.5 * (lo + hi), u, v
        if v_old is not None and max(np.abs(v - v_old).max(), np.abs(u - u_old).max()) <= 1e-15:
            i = int(np.argmax(v))
            return float(ratios[i]), u, v
        v_old, u_old = v, u
        b = b @ b
        b /= b.max()
    raise RuntimeError(f"power iteration failed to converge (Collatz gap {hi - lo:.3e})")


def _critical_log_weights(lt: np.ndarray):
    """Shift ``log2 T`` so every entry is <= 0 and max-mean cycles weigh 0.

    Returns ``(mu, L)`` with ``mu`` the max cycle mean and
    ``L_ij = log2 t_ij - mu + x_j - x_i`` for max-plus potentials ``x``.
    The shift is a diagonal similarity, so spectral quantities are unchanged.
    """
    mu = max_cycle_mean(lt)
    lhat = lt - mu
    m = lt.shape[0]
    s = lhat.copy()
    for k in range(m):
        s = np.maximum(s, s[:, k, None] + s[None, k, :])
    crit = int(np.argmax(np.diag(s)))
    x = s[:, crit].copy()
    x[crit] = max(x[crit], 0.0)
    with np.errstate(invalid="ignore"):
        shifted = lhat + x[None, :] - x[:, None]
    shifted = np.where(np.isfinite(lt), np.minimum(shifted, 0.0), -np.inf)
    return mu, shifted


def _markov_tilted(model: MarkovNoise, beta: float):
    """Tilted matrix pieces for exponent ``beta``.

    Returns ``(mu, log2 rho(A), u, v, A, L)`` where ``A = 2**(beta L)``
    entrywise and ``log2 rho(T**beta) = beta * mu + log2 rho(A)``, which stays
    finite for large ``beta``.
    """
    with np.errstate(divide="ignore"):
        lt = np.log2(model.matrix)
    mu, lw = _critical_log_weights(lt)
    finite = np.isfinite(lw)
    a = np.where(finite, np.exp2(beta * np.where(finite, lw, 0.0)), 0.0)
    rho, u, v = _perron(a)
    return mu, math.log2(rho), u, v, a, np.where(finite, lw, 0.0)


# -- entropy rates ------------------------------------------------------------

def renyi_entropy_rate(model: NoiseModel, alpha: float) -> float:
    if alpha <= 0 or alpha == 1:
        raise ValueError(f"Rényi order must be positive and != 1, got {alpha!r}")
    if isinstance(model, BscNoise):
        p, q = model.p, 1 - model.p
        # log2(q^a + p^a) = a log2 q + log2(1 + (p/q)^a)
        s = alpha * model.log2_q + math.log2(1 + (p / q) ** alpha)
        return s / (1 - alpha)
    _check_irreducible(model)
    mu, lrho, *_ = _markov_tilted(model, alpha)
    return (alpha * mu + lrho) / (1 - alpha)


def shannon_entropy_rate(model: NoiseModel) -> float:
    if isinstance(model, BscNoise):
        return binary_entropy(model.p)
    _check_irreducible(model)
    t = model.matrix
    pi = stationary_distribution(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        row = -np.where(t > 0, t * np.log2(t), 0.0).sum(axis=1)
    return float(pi @ row)


def stationary_distribution(t: np.ndarray) -> np.ndarray:
    m = t.shape[0]
    lhs = np.vstack([t.T - np.eye(m), np.ones(m)])
    rhs = np.zeros(m + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    return pi


def min_entropy_rate(model: NoiseModel) -> float:
    if isinstance(model, BscNoise):
        return -model.log2_q
    with np.errstate(divide="ignore"):
        lt = np.log2(model.matrix)
    return -max_cycle_mean(lt)


# -- guesswork cumulant and its transform ------------------------------------

def guesswork_scgf(model: NoiseModel, alpha: float) -> float:
    """``Lambda(alpha)``: ``alpha * H_{1/(1+alpha)}`` above -1, ``-H_min`` below."""
    if alpha == 0:
        return 0.0
    if alpha <= -1:
        return -min_entropy_rate(model)
    beta = 1.0 / (1.0 + alpha)
    if isinstance(model, BscNoise):
        r = model.p / (1 - model.p)
        return model.log2_q + (1 + alpha) * math.log2(1 + r**beta)
    _check_irreducible(model)
    mu, lrho, *_ = _markov_tilted(model, beta)
    return mu + (1 + alpha) * lrho


def guesswork_scgf_derivative(model: NoiseModel, alpha: float) -> float:
    """``Lambda'(alpha)`` on the open branch ``alpha > -1``.

    For the BSC this is the binary entropy of the tilted law
    ``(q**beta, p**beta) / sum``; for Markov noise it is
    ``log2 rho(A) - beta * u'(A o log2 Ahat)v / (rho u'v)``.
    """
    if alpha <= -1:
        raise ValueError("derivative is defined on alpha > -1 only")
    beta = 1.0 / (1.0 + alpha)
    if isinstance(model, BscNoise):
        r = model.p / (1 - model.p)
        rb = r**beta
        return binary_entropy(rb / (1 + rb))
    _check_irreducible(model)
    mu, lrho, u, v, a, lhat = _markov_tilted(model, beta)
    rho = 2.0**lrho
    weighted = u @ (a * lhat) @ v
    return lrho - beta * weighted / (rho * (u @ v))


def _objective(model, g, alpha):
    return g * alpha - guesswork_scgf(model, alpha)


def rate_function(model: NoiseModel, g: float) -> RateFunctionResult:
    """Legendre-Fenchel transform ``I(g) = sup_alpha {g alpha - Lambda(alpha)}``.

    The open branch ``alpha > -1`` is maximized by bisection on the
    increasing derivative ``Lambda'``; the closed branch ``alpha <= -1``
    contributes ``H_min - g`` at ``alpha = -1``. The larger is returned.
    """
    if not (0.0 <= g <= 1.0):
        raise ValueError(f"g must lie in [0, 1], got {g!r}")
    h_min = min_entropy_rate(model)
    boundary = h_min - g

    lo = -1.0 + 1e-12
    # Lambda' tends to 0 from above as alpha -> -1 for the BSC
    if guesswork_scgf_derivative(model, lo) >= g:
        return RateFunctionResult(g, max(boundary, 0.0), -1.0, 0.0)
    hi = ALPHA_MAX
    while guesswork_scgf_derivative(model, hi) < g and hi < ALPHA_CAP:
        lo, hi = hi, hi * 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if guesswork_scgf_derivative(model, mid) < g:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * max(1.0, abs(hi)):
            break
    f_lo = _objective(model, g, lo)
    f_hi = _objective(model, g, hi)
    if f_hi >= f_lo:
        alpha_star, open_value = hi, f_hi
    else:
        alpha_star, open_value = lo, f_lo
    width = abs(f_hi - f_lo)
    if boundary > open_value:
        return RateFunctionResult(g, max(boundary, 0.0), -1.0, 0.0)
    return RateFunctionResult(g, max(open_value, 0.0), alpha_star, width)


def channel_summary(model: NoiseModel) -> ChannelSummary:
    h = shannon_entropy_rate(model)
    h_min = min_entropy_rate(model)
    return ChannelSummary(h, h_min, 1.0 - h, 1.0 - h_min)


def success_probability_estimate(model: NoiseModel, n: int, rate: float) -> float:
    """Approximate probability that ML decoding is correct, ``2**(-n I(1-R))``."""
    if not (0.0 < rate < 1.0):
        raise ValueError("code rate must lie in (0, 1)")
    if n < 1:
        raise ValueError("block length must be at least 1")
    return 2.0 ** (-n * rate_function(model, 1.0 - rate).value)


def confident_query_exponent(model: NoiseModel, rate: float, tol: float = 1e-10) -> Optional[float]:
    """Largest ``g`` in ``(0, 1-R)`` with ``I(g) < 1 - R - g``, or ``None``.

    ``phi(g) = I(g) - (1 - R - g)`` is convex, so its negative set is an
    interval. Golden-section search finds the minimum of ``phi``; if it is
    negative, bisection between the minimizer and ``1 - R`` locates the right
    end of the interval to within ``tol``.
    """
    if not (0.0 < rate < 1.0):
        raise ValueError("code rate must lie in (0, 1)")
    top = 1.0 - rate

    def phi(g):
        return rate_function(model, g).value - (top - g)

    inv_golden = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = 0.0, top
    c, d = b - inv_golden * (b - a), a + inv_golden * (b - a)
    fc, fd = phi(c), phi(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv_golden * (b - a)
            fc = phi(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_golden * (b - a)
            fd = phi(d)
    lo, f_lo = (c, fc) if fc <= fd else (d, fd)
    if f_lo > -STRICT_MARGIN:
        return None
    hi = top
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if phi(mid) <= -STRICT_MARGIN:
            lo = mid
        else:
            hi = mid
    return lo


def capacity_point(rate: float) -> float:
    """BSC bit-flip probability where ``1 - h(p) = R``."""
    from scipy.optimize import brentq

    return brentq(lambda p: binary_entropy(p) - (1 - rate), 1e-15, 0.5, xtol=1e-17, rtol=1e-15)


def min_capacity_point(rate: float) -> float:
    """BSC bit-flip probability where ``1 + log2(1 - p) = R``."""
    return -math.expm1(-(1 - rate) * math.log(2))
