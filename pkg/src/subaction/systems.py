"""Inverse-branch systems: the doubling map, a Farey-type map with an
indifferent fixed point, and Möbius branches induced by 2x2 matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConstructionError
from .grid import INTERVAL, PERIODIC

RealMap = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Matrix2:
    """Row-major 2x2 matrix ``[[a, b], [c, d]]``."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def of(cls, entries: Sequence[float]) -> Matrix2:
        if len(entries) != 4:
            raise ConstructionError(f"a 2x2 matrix needs 4 entries, got {len(entries)}")
        return cls(*(float(e) for e in entries))

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def scaled(self, t: float) -> Matrix2:
        return Matrix2(t * self.a, t * self.b, t * self.c, t * self.d)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.as_array()))))


@dataclass(frozen=True)
class Branch:
    map: RealMap
    image: tuple[float, float]
    derivative: Optional[RealMap] = None
    inverse: Optional[RealMap] = None

    def __call__(self, x):
        return self.map(x)


@dataclass(frozen=True)
class BranchSystem:
    """Ordered inverse branches; index 0 is always tau_1."""

    branches: tuple[Branch, ...]
    forward: Optional[RealMap] = None
    domain_mode: str = INTERVAL
    working_interval: tuple[float, float] = (0.0, 1.0)
    name: str = "custom"

    def __post_init__(self):
        if len(self.branches) < 2:
            raise ConstructionError("a branch system needs at least two branches")

    @property
    def is_ifs(self) -> bool:
        return self.forward is None


def doubling_system(mode: str = INTERVAL) -> BranchSystem:
    """Branches x/2 and (x+1)/2 of T(x) = 2x mod 1."""
    if mode == PERIODIC:
        def forward(x):
            return np.mod(2.0 * np.asarray(x, dtype=float), 1.0)
    elif mode == INTERVAL:
        def forward(x):
            x = np.asarray(x, dtype=float)
            return np.where(x <= 0.5, 2.0 * x, 2.0 * x - 1.0)
    else:
        raise ConstructionError(f"unknown mode {mode!r}")
    half = lambda x: np.full_like(np.asarray(x, dtype=float), 0.5)
    branches = (
        Branch(lambda x: np.asarray(x, dtype=float) / 2.0, (0.0, 0.5), half, lambda y: 2.0 * np.asarray(y, dtype=float)),
        Branch(lambda x: (np.asarray(x, dtype=float) + 1.0) / 2.0, (0.5, 1.0), half,
               lambda y: 2.0 * np.asarray(y, dtype=float) - 1.0),
    )
    return BranchSystem(branches, forward, mode, (0.0, 1.0), "doubling")


def _farey_forward(y):
    y = np.asarray(y, dtype=float)
    ya = np.atleast_1d(y)
    out = np.empty_like(ya)
    left = ya <= 0.5
    out[left] = ya[left] / (1.0 - ya[left])
    out[~left] = 2.0 - 1.0 / ya[~left]
    return out.reshape(y.shape) if y.ndim else float(out[0])


def farey_like_system() -> BranchSystem:
    """Branches x/(1+x) and 1/(2-x); tau_1 has the indifferent fixed point 0."""
    branches = (
        Branch(lambda x: np.asarray(x, dtype=float) / (1.0 + np.asarray(x, dtype=float)), (0.0, 0.5),
               lambda x: 1.0 / (1.0 + np.asarray(x, dtype=float)) ** 2,
               lambda y: np.asarray(y, dtype=float) / (1.0 - np.asarray(y, dtype=float))),
        Branch(lambda x: 1.0 / (2.0 - np.asarray(x, dtype=float)), (0.5, 1.0),
               lambda x: 1.0 / (2.0 - np.asarray(x, dtype=float)) ** 2,
               lambda y: 2.0 - 1.0 / np.asarray(y, dtype=float)),
    )
    return BranchSystem(branches, _farey_forward, INTERVAL, (0.0, 1.0), "farey")


def mobius_coefficients(m: Matrix2) -> tuple[float, float, float, float]:
    """(alpha, beta, gamma, delta) with tau(x) = (alpha x + beta) / (gamma x + delta)."""
    return m.a - m.b, m.b, m.a + m.c - m.d - m.b, m.b + m.d


def mobius_branch(m: Matrix2) -> Branch:
    if min(m.a, m.b, m.c, m.d) < 0:
        raise ConstructionError(f"matrix entries must be nonnegative: {m}")
    det = m.det
    if det == 0:
        raise ConstructionError(f"singular matrix {m}")
    if det < 0:
        raise ConstructionError(f"matrix {m} has negative determinant: reversed image interval")
    al, be, ga, de = mobius_coefficients(m)
    # gamma x + delta is affine, so it vanishes on [0, 1] iff the endpoint values differ in sign
    if de == 0 or ga + de == 0 or (de > 0) != (ga + de > 0):
        raise ConstructionError(f"denominator of the Möbius branch of {m} vanishes on [0, 1]")
    slope = max(abs(det) / de**2, abs(det) / (ga + de) ** 2)
    if not slope < 1.0:
        raise ConstructionError(f"Möbius branch of {m} is not a contraction (max slope {slope:.6g})")

    def tau(x):
        x = np.asarray(x, dtype=float)
        return (al * x + be) / (ga * x + de)

    def dtau(x):
        x = np.asarray(x, dtype=float)
        return det / (ga * x + de) ** 2

    def tau_inv(y):
        y = np.asarray(y, dtype=float)
        return (de * y - be) / (al - ga * y)

    e0, e1 = float(tau(0.0)), float(tau(1.0))
    lo, hi = min(e0, e1), max(e0, e1)
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo < 0.0 or hi > 1.0:
        raise ConstructionError(f"image [{lo}, {hi}] of the branch of {m} is not inside [0, 1]")
    return Branch(tau, (lo, hi), dtau, tau_inv)


def mobius_system(a1: Matrix2, a2: Matrix2) -> BranchSystem:
    """IFS of the two Möbius branches; the state space is the hull of their images."""
    b1, b2 = mobius_branch(a1), mobius_branch(a2)
    lo = min(b1.image[0], b2.image[0])
    hi = max(b1.image[1], b2.image[1])
    return BranchSystem((b1, b2), None, INTERVAL, (lo, hi), "mobius")
