"""Brute-force lower bounds for m(A) from periodic orbits.

Every periodic orbit carries an invariant probability, so the best
Birkhoff average over orbits of period <= p is a lower bound for m(A) that
shares no code with the iterative solver.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ParameterError
from .grid import INTERVAL
from .potentials import Potential
from .systems import BranchSystem

_FIXED_TOL = 1e-14


@dataclass(frozen=True)
class OrbitCertificate:
    period: int
    points: tuple[float, ...]
    word: tuple[int, ...]
    birkhoff_average: Optional[float] = None

    def as_dict(self) -> dict:
        return {"period": self.period, "points": list(self.points), "word": list(self.word),
                "average": self.birkhoff_average}


def _necklaces(p: int) -> list[list[int]]:
    """Classes of k in 0..2^p - 2 under k -> 2k mod (2^p - 1), each in forward order."""
    n = 2**p - 1
    seen = np.zeros(n, dtype=bool)
    out = []
    for k in range(n):
        if seen[k]:
            continue
        cyc = [k]
        seen[k] = True
        j = (2 * k) % n
        while j != k:
            cyc.append(j)
            seen[j] = True
            j = (2 * j) % n
        out.append(cyc)
    return out


def doubling_orbits(p: int, exact: bool = False) -> list[OrbitCertificate]:
    """Periodic orbits of x -> 2x mod 1 among the points k / (2^p - 1).

    By default every orbit whose period divides p is returned (2^p - 1
    points in total); ``exact=True`` keeps only minimal period p. The word
    of a certificate is its starting numerator k.
    """
    if not (isinstance(p, (int, np.integer)) and 1 <= p <= 20):
        raise ParameterError(f"period must be an integer in [1, 20], got {p!r}")
    n = 2**p - 1
    out = []
    for cyc in _necklaces(p):
        if exact and len(cyc) != p:
            continue
        out.append(OrbitCertificate(len(cyc), tuple(k / n for k in cyc), (cyc[0],)))
    return out


def lyndon_words(p: int, k: int = 2) -> list[tuple[int, ...]]:
    """Aperiodic necklace representatives of length p over k letters."""
    words = []
    for w in itertools.product(range(k), repeat=p):
        rots = [w[i:] + w[:i] for i in range(p)]
        if w == min(rots) and len(set(rots)) == p:
            words.append(w)
    return words


def _compose(sys: BranchSystem, word):
    def g(z):
        for j in reversed(word):
            z = sys.branches[j].map(z)
        return float(z)
    return g


def word_fixed_point(sys: BranchSystem, word) -> Optional[float]:
    """Fixed point of tau_{w0} o ... o tau_{w(p-1)}, or None if none is found."""
    g = _compose(sys, word)
    lo, hi = sys.working_interval
    z = 0.5 * (lo + hi)
    for _ in range(200):
        z = g(z)
    if lo - _FIXED_TOL <= z <= hi + _FIXED_TOL and abs(g(z) - z) <= _FIXED_TOL:
        return z
    # slow (indifferent) fixed points: try the endpoints, then bisection
    for e in (lo, hi):
        if abs(g(e) - e) <= _FIXED_TOL:
            return e
    a, b = lo, hi
    fa = g(a) - a
    if fa * (g(b) - b) < 0:
        for _ in range(200):
            c = 0.5 * (a + b)
            fc = g(c) - c
            if fa * fc <= 0:
                b = c
            else:
                a, fa = c, fc
        return 0.5 * (a + b)
    return None


def ifs_orbit(sys: BranchSystem, A: Potential, word) -> Optional[OrbitCertificate]:
    """Orbit of a branch word: points y_k = tau_{w_k}(y_{k+1}), forward order y_0 -> y_1 -> ..."""
    z = word_fixed_point(sys, word)
    if z is None:
        warnings.warn(f"word {word} has no attracting fixed point; skipped", RuntimeWarning, stacklevel=3)
        return None
    p = len(word)
    pts = [0.0] * p
    y = z
    for k in reversed(range(p)):
        y = float(sys.branches[word[k]].map(y))
        pts[k] = y
    avg = float(np.mean([A.on_branch(word[k], pts[k]) for k in range(p)]))
    return OrbitCertificate(p, tuple(pts), tuple(word), avg)


def _with_average(c: OrbitCertificate, A: Potential) -> OrbitCertificate:
    return OrbitCertificate(c.period, c.points, c.word, float(np.mean(A.eval(np.array(c.points)))))


def periodic_candidates(A: Potential, sys: BranchSystem, p_max: int = 8) -> list[OrbitCertificate]:
    """All periodic orbits up to period ``p_max`` with their Birkhoff averages."""
    if not (isinstance(p_max, (int, np.integer)) and p_max >= 1):
        raise ParameterError(f"p_max must be a positive integer, got {p_max!r}")
    out = []
    if sys.name == "doubling":
        if p_max > 20:
            raise ParameterError("doubling orbits are enumerated up to period 20")
        for p in range(1, p_max + 1):
            out += [_with_average(c, A) for c in doubling_orbits(p, exact=True)]
        if sys.domain_mode == INTERVAL:
            # on [0, 1] the endpoint 1 is a second fixed point
            out.insert(1, OrbitCertificate(1, (1.0,), (1,), float(A.eval(1.0))))
        return out
    for p in range(1, p_max + 1):
        for w in lyndon_words(p, len(sys.branches)):
            c = ifs_orbit(sys, A, w)
            if c is not None:
                out.append(c)
    return out


def best_periodic_value(A: Potential, sys: BranchSystem, p_max: int = 8) -> OrbitCertificate:
    """Orbit with the largest Birkhoff average; ties go to the shortest period."""
    cands = periodic_candidates(A, sys, p_max)
    if not cands:
        raise ParameterError("no periodic orbit could be certified")
    best = cands[0]
    for c in cands[1:]:
        if c.birkhoff_average > best.birkhoff_average + 1e-13:
            best = c
    return best
