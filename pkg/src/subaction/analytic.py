"""Closed-form and series-form calibrated subactions used as references.

Most references are built from one recipe: if a composition ``eta`` of
inverse branches has an attracting fixed point ``q`` and ``F`` collects the
potential along that composition, then

    V(x) = sum_{i >= 0} [F(eta^i x) - K],    K = F(q),

solves ``V(x) - V(eta x) = F(x) - K``. ``SeriesSubaction`` holds such a
recipe; the other pieces of a subaction follow by one branch step each.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, NumericError, ParameterError, UnsupportedParameterError
from .potentials import FAREY_X0, FAREY_X1, SIN_ORBIT, cantor_distance

CONJECTURAL = "CONJECTURAL"


def _unit(x, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    xa = np.asarray(x, dtype=float)
    if np.any(np.isnan(xa)) or np.any(xa < lo - 1e-12) or np.any(xa > hi + 1e-12):
        raise DomainError(f"points outside [{lo}, {hi}]")
    return xa


def _out(v):
    v = np.asarray(v, dtype=float)
    return float(v) if v.ndim == 0 else v


@dataclass(frozen=True)
class SeriesSubaction:
    F: Callable
    eta: Callable
    K: float
    q: float
    n_terms: int = 30
    error_bound: Optional[Callable[[int], float]] = None

    def __post_init__(self):
        if abs(float(self.eta(self.q)) - self.q) > 1e-12:
            raise ParameterError(f"q = {self.q} is not fixed by eta")
        if abs(float(self.F(self.q)) - self.K) > 1e-12:
            raise ParameterError(f"F(q) = {float(self.F(self.q))} differs from K = {self.K}")


def series_eval(s: SeriesSubaction, x, n_terms: Optional[int] = None):
    """Truncated sum ``sum_{i < n_terms} [F(eta^i x) - K]``."""
    n = s.n_terms if n_terms is None else n_terms
    if n < 1:
        raise ParameterError(f"need at least one term, got {n}")
    y = np.asarray(x, dtype=float)
    total = np.zeros_like(y)
    for _ in range(n):
        total = total + (np.asarray(s.F(y), dtype=float) - s.K)
        y = np.asarray(s.eta(y), dtype=float)
    if not np.all(np.isfinite(total)):
        raise NumericError("non-finite partial sum")
    return _out(total)


# ---- A = -(x - 1/3)^2 on the doubling map: period-3 Mather set {1/7, 2/7, 4/7}

QUADRATIC_M = -2.0 / 63.0
_QUADRATIC_PIECES = (
    lambda x: 10 / 63 - 2 * x / 21 - x**2 / 3,
    lambda x: 5 / 63 + 2 * x / 7 - x**2 / 3,
    lambda x: 10 * x / 21 - x**2 / 3,
    lambda x: -5 / 63 + 4 * x / 7 - x**2 / 3,
)


def quadratic_pieces(x) -> np.ndarray:
    x = _unit(x)
    return np.array([p(x) for p in _QUADRATIC_PIECES])


def quadratic_exact(x):
    """``(max_j V_j(x), j)`` with j in 1..4 the index of the maximal quadratic."""
    vals = quadratic_pieces(x)
    j = np.argmax(vals, axis=0) + 1
    best = vals.max(axis=0)
    if np.ndim(x) == 0:
        return float(best), int(j)
    return best, j


def quadratic_subaction(x):
    return quadratic_exact(x)[0]


def quadratic_alt_piece(x):
    """First quadratic from the F/eta construction with eta = tau_1 tau_1 tau_2."""
    x = np.asarray(x, dtype=float)
    return -(x**2) / 3 - 2 * x / 21 + 1 / 49


# ---- involution kernel for the Farey-type map

def involution_kernel(x, y):
    """``W(x, y) = 2 log(x + y - 2 x y)``."""
    s = np.asarray(x, dtype=float) + np.asarray(y, dtype=float) - 2.0 * np.asarray(x, dtype=float) * np.asarray(y, dtype=float)
    if np.any(s <= 0) or np.any(np.isnan(s)):
        raise DomainError("x + y - 2xy must be positive")
    return _out(2.0 * np.log(s))


def farey_kernel_preimage(y, x, cylinder: int):
    """Inverse of the skew map on cylinder 0 (y <= 1/2) or 1 (y >= 1/2)."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if cylinder == 0:
        return y / (1.0 - y), x / (1.0 + x)
    if cylinder == 1:
        return 2.0 - 1.0 / y, 1.0 / (2.0 - x)
    raise ParameterError(f"cylinder must be 0 or 1, got {cylinder}")


def kernel_cocycle_residual(y, x, cylinder: int):
    """``A(q) + W(p, q) - W(y, x) - A(y)`` with ``(p, q)`` the preimage of ``(y, x)``.

    A = log f' of the Farey-type map, evaluated through its inverse
    branches so that both cylinders use the formula of their own branch.
    """
    from .potentials import _farey_log_derivative

    p, q = farey_kernel_preimage(y, x, cylinder)
    res = (_farey_log_derivative(q) + involution_kernel(p, q) - involution_kernel(y, x)
           - _farey_log_derivative(y))
    return _out(res)


FAREY_M = 0.5 * (-2.0 * math.log(1.0 - FAREY_X0) - 2.0 * math.log(FAREY_X1))


def farey_exact(x, which: str = "log"):
    """Kernel-slice subaction: ``max(W(x0, x), W(x1, x))`` for log f', or
    ``max(-2 log x, -2 log(1 - x))`` (slices at 0 and 1 of -W) for -log f'."""
    x = _unit(x)
    if which == "log":
        return _out(np.maximum(involution_kernel(FAREY_X0, x), involution_kernel(FAREY_X1, x)))
    if which == "neg":
        with np.errstate(divide="ignore"):
            return _out(np.maximum(-2.0 * np.log(x), -2.0 * np.log1p(-x)))
    raise ParameterError(f"which must be 'log' or 'neg', got {which!r}")


# ---- A = sin^2(2 pi x): Mather set {1/3, 2/3}, m = 3/4

SINSQ_M = 0.75


def sinsq_instance(n_terms: int = 30) -> SeriesSubaction:
    """Pairs of the alternating series around 2/3: eta(x) = x/4 + 1/2."""
    return SeriesSubaction(
        F=lambda x: np.sin(np.pi * np.asarray(x, dtype=float)) ** 2 + np.sin(np.pi * np.asarray(x, dtype=float) / 2) ** 2,
        eta=lambda x: np.asarray(x, dtype=float) / 4 + 0.5,
        K=2 * SINSQ_M,
        q=2 / 3,
        n_terms=n_terms,
        error_bound=lambda n: 2 * math.pi / (3 * 4.0 ** (n - 1)),
    )


def sinsq_direct(x, n_terms: int = 30):
    """The alternating series summed term by term, ``2 * n_terms`` terms.

    ``sum_i [sin^2(pi (2/3 + (-1/2)^i (x - 2/3))) - 3/4]``.
    """
    x = _unit(x)
    u = x - 2 / 3
    total = np.zeros_like(u)
    r = 1.0
    for _ in range(2 * n_terms):
        total = total + np.sin(np.pi * (2 / 3 + r * u)) ** 2 - SINSQ_M
        r *= -0.5
    return _out(total)


def sinsq_series(x, n_terms: int = 30, which: str = "V"):
    """Series subaction for sin^2(2 pi x), pinned by V2(2/3) = 0.

    ``n_terms`` counts steps of eta (two terms of the alternating series);
    the tail after n steps is at most ``2 pi / (3 * 4**(n-1))``.
    ``which`` selects V2, V1(x) = V2(1 - x), or V = max(V1, V2).
    """
    x = _unit(x)
    s = sinsq_instance(n_terms)
    if which == "V2":
        return series_eval(s, x)
    if which == "V1":
        return series_eval(s, 1.0 - x)
    if which == "V":
        return _out(np.maximum(series_eval(s, x), series_eval(s, 1.0 - x)))
    raise ParameterError(f"which must be 'V', 'V1' or 'V2', got {which!r}")


def sinsq_power(x, k_order: int = 25, which: str = "V2"):
    """Taylor expansion of V2 around 2/3, orders up to ``2 * k_order + 1``.

    Summing the geometric factors of the alternating series in closed form
    gives coefficients 2^(2k+1)/(2^(2k+1)+1) (odd) and 2^(2k)/(2^(2k)-1) (even).
    """
    xa = np.asarray(x, dtype=float)
    if which == "V1":
        xa = 1.0 - xa
    elif which != "V2":
        raise ParameterError(f"which must be 'V1' or 'V2', got {which!r}")
    u = xa - 2 / 3
    if np.any(np.abs(u) >= 1):
        raise DomainError("the power series is used only for |x - 2/3| < 1")
    z = 2 * np.pi * u
    odd = np.zeros_like(z)
    even = np.zeros_like(z)
    for k in range(k_order + 1):
        odd = odd + (-1) ** k * z ** (2 * k + 1) / math.factorial(2 * k + 1) * 2.0 ** (2 * k + 1) / (2.0 ** (2 * k + 1) + 1)
        if k >= 1:
            even = even + (-1) ** k * z ** (2 * k) / math.factorial(2 * k) * 4.0**k / (4.0**k - 1)
    s, c = math.sin(4 * math.pi / 3), math.cos(4 * math.pi / 3)
    return _out(0.5 * s * odd - 0.5 * c * even)


# ---- A = sin(2 pi x): Mather set {1/15, 2/15, 4/15, 8/15}

def _sin_pot(x):
    return np.sin(2 * np.pi * np.asarray(x, dtype=float))


SIN_M = float(np.mean(_sin_pot(np.array(SIN_ORBIT))))


def sin_instance(n_terms: int = 20) -> SeriesSubaction:
    """eta = tau_1^3 tau_2, so eta(x) = (x + 1)/16 with fixed point 1/15."""
    def F(x):
        x = np.asarray(x, dtype=float)
        return sum(_sin_pot((x + 1) / 2**j) for j in range(1, 5))

    # F(1/15) is the Birkhoff sum over the orbit, 4m up to rounding
    # |F'| <= 2 pi (15/16) and eta contracts by 1/16, so the tail after n terms is <= 2 pi / 16^n
    return SeriesSubaction(F, lambda x: (np.asarray(x, dtype=float) + 1) / 16, float(F(1 / 15)), 1 / 15, n_terms,
                           lambda n: 2 * np.pi / 16.0**n)


def sin_pieces(x, n_terms: int = 20) -> np.ndarray:
    """Raw pieces V1..V5 (rows), with V1(1/15) = 0 and V_{k+1}(x) = V_k(x/2) + A(x/2) - m."""
    x = _unit(x)
    s = sin_instance(n_terms)
    rows = []
    for k in range(5):
        # V_{k+1}(x) = V1(x / 2^k) + sum_{i=1..k} A(x / 2^i) - k m
        acc = series_eval(s, x / 2**k)
        for i in range(1, k + 1):
            acc = acc + _sin_pot(x / 2**i) - SIN_M
        rows.append(np.asarray(acc, dtype=float))
    return np.array(rows)


@lru_cache(maxsize=8)
def _sin_top(n_terms: int) -> float:
    xs = np.linspace(0.0, 1.0, 20001)
    env = sin_pieces(xs, n_terms).max(axis=0)
    top = float(env.max())
    # refine around the best node
    i = int(np.argmax(env))
    fine = np.linspace(xs[max(i - 1, 0)], xs[min(i + 1, xs.size - 1)], 2001)
    return max(top, float(sin_pieces(fine, n_terms).max()))


def sin_subaction(x, n_terms: int = 20):
    """max of the five pieces, shifted so that its sup over [0, 1] is 0."""
    return _out(sin_pieces(x, n_terms).max(axis=0) - _sin_top(n_terms))


def sin_uncentered_v1(x, n_terms: int = 40):
    """Partial sum of ``sum_{i >= 1} sin(pi (x + 1) / 2^i)``; only differences in x are meaningful."""
    x = _unit(x)
    return _out(sum(np.sin(np.pi * (x + 1) / 2.0**i) for i in range(1, n_terms + 1)))


# ---- joint spectral radius examples

_SQ17 = math.sqrt(17.0)
_SQ2 = math.sqrt(2.0)
_SQ5609 = math.sqrt(5609.0)

JSR1_B = (3 + _SQ17) / 2
JSR1_M = math.log(JSR1_B)
JSR1_Q = (_SQ17 - 3) / 2
JSR_CASE1_M = math.log(2 + _SQ2)
T1 = 4 * (4 + 3 * _SQ2) / (18 + 13 * _SQ2)
T2 = (367765714335 - 4904055941 * _SQ5609) / 533794816
T3 = (1900479599391 + 25366638853 * _SQ5609) / 4162416040000
CASE2_B = (89 + _SQ5609) / 34


def _jsr_domain(x):
    return _unit(x, 1 / 3, 2 / 3)


def jsr_exact_example1(x):
    """``max(log(x + b), log(1 - x + b))`` with b = (3 + sqrt 17)/2 on [1/3, 2/3]."""
    x = _jsr_domain(x)
    return _out(np.maximum(np.log(x + JSR1_B), np.log(1 - x + JSR1_B)))


def jsr_product_form(x, n_factors: int = 50):
    """``log prod_{i < n} (11 + 3 eta^i x) / (11 + 3 q)`` with eta = tau_2 tau_1 = (2x+6)/(3x+11).

    Equals log(x + b) - log(q + b) in the limit.
    """
    if n_factors < 1:
        raise ParameterError("need at least one factor")
    y = _jsr_domain(x).copy()
    total = np.zeros_like(y)
    for _ in range(n_factors):
        total = total + np.log((11 + 3 * y) / (11 + 3 * JSR1_Q))
        y = (2 * y + 6) / (3 * y + 11)
    return _out(total)


def case2_m(t: float) -> float:
    return 0.25 * math.log((75 + _SQ5609) * t)


def jsr_exact_parametric(x, t: float):
    """Closed-form ``(V(x), m)`` for the scaled pair on its two validity windows.

    Case 1 (0 < t <= t1): V = max(log(x + 1 + sqrt 2), log(t (2 + sqrt 2 - x/sqrt 2))).
    Case 2 (t2 <= t <= t3): period-4 pieces built from log(b - x) with d = e^{-m}.
    """
    x = _jsr_domain(x)
    if 0 < t <= T1:
        v2 = np.log(x + 1 + _SQ2)
        v1 = np.log(t * (2 + _SQ2 - x / _SQ2))
        return _out(np.maximum(v1, v2)), JSR_CASE1_M
    if T2 <= t <= T3:
        m = case2_m(t)
        d = math.exp(-m)
        b = CASE2_B
        v1 = np.log(b - x)
        v2 = np.log(d * (-1 - x + b * (3 + x)))
        v3 = np.log(2 * d**2 * (-2 - x + b * (5 + 2 * x)))
        v4 = np.log(2 * d**3 * (-7 - 3 * x + b * (17 + 7 * x)))
        return _out(np.max([v1, v2, v3, v4], axis=0)), m
    raise UnsupportedParameterError(
        f"t = {t} lies outside (0, {T1:.6f}] and [{T2:.6f}, {T3:.6f}]; use the numeric solver")


# ---- minus distance to the Cantor set (candidate subactions, not proved)

def cantor_G(x, n_terms: int = 40):
    """``sum_{i=1..n} A(x / 2^i)`` with A = -d(., K)."""
    x = _unit(x)
    return _out(sum(cantor_distance(x / 2.0**i) for i in range(1, n_terms + 1)))


def cantor_H(x, n_terms: int = 40):
    """``sum_{i=1..n} [A(tau_1 eta^i x) + A(tau_2 tau_1 eta^i x)]`` with eta(x) = x/4 + 1/2."""
    x = _unit(x)
    y = np.array(x, dtype=float)
    total = np.zeros_like(y)
    for _ in range(n_terms):
        y = y / 4 + 0.5
        t1 = y / 2
        total = total + cantor_distance(t1) + cantor_distance((t1 + 1) / 2)
    return _out(total)


def cantor_conjecture_series(x, which: str = "G", n_terms: int = 40):
    """Candidate subactions V (from G) or W (from H), reflected about 1/2.

    Both are CONJECTURAL: no proof that they are calibrated is known.
    """
    x = _unit(x)
    if which == "G":
        base = cantor_G
    elif which == "H":
        base = cantor_H
    else:
        raise ParameterError(f"which must be 'G' or 'H', got {which!r}")
    return _out(np.where(x < 0.5, base(x, n_terms), base(1.0 - x, n_terms)))


def self_subaction_exact(x, alpha: float, beta: float):
    x = np.asarray(x, dtype=float)
    return _out(beta - alpha * np.abs(np.minimum(x, 1.0 - x) - 1.0 / 3.0))
