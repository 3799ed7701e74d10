"""Catalog of potentials with the metadata the solver and the golden tests use.

Every potential is vectorized: it accepts scalars or numpy arrays.
Potentials defined piecewise on branch images (the matrix potentials of an
IFS) carry one formula per branch, so the Bellman step evaluates branch j's
formula on branch j's image even where two images touch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import CatalogError, ConstructionError, DomainError, ParameterError
from .grid import INTERVAL, PERIODIC
from .systems import Matrix2, mobius_coefficients, mobius_system

_EDGE_SLACK = 1e-12

# period-2 orbit of the Farey-type map, x0 = f(x1), x1 = f(x0)
FAREY_X0 = (3.0 - math.sqrt(5.0)) / 2.0
FAREY_X1 = (math.sqrt(5.0) - 1.0) / 2.0

SIN_ORBIT = (1 / 15, 2 / 15, 4 / 15, 8 / 15)


@dataclass(frozen=True, eq=False)
class Potential:
    func: Callable
    name: str
    symmetric: bool = False
    domain_mode: str = INTERVAL
    known_m: Optional[float] = None
    known_mather: Optional[tuple[float, ...]] = None
    domain: tuple[float, float] = (0.0, 1.0)
    pieces: Optional[tuple[Callable, ...]] = None
    images: Optional[tuple[tuple[float, float], ...]] = None
    params: tuple[float, ...] = ()
    note: str = ""
    extra: dict = field(default_factory=dict)

    def _check(self, y: np.ndarray, lo: float, hi: float) -> None:
        if np.any(y < lo - _EDGE_SLACK) or np.any(y > hi + _EDGE_SLACK) or np.any(np.isnan(y)):
            raise DomainError(f"{self.name}: points outside [{lo}, {hi}]")

    def eval(self, x):
        y = np.asarray(x, dtype=float)
        self._check(y, *self.domain)
        if self.pieces is None:
            out = np.asarray(self.func(y), dtype=float) * np.ones_like(y)
        else:
            out = np.full(y.shape, np.nan)
            todo = np.ones(y.shape, dtype=bool)
            for piece, (lo, hi) in zip(self.pieces, self.images):
                sel = todo & (y >= lo - _EDGE_SLACK) & (y <= hi + _EDGE_SLACK)
                out[sel] = piece(y[sel])
                todo &= ~sel
            if np.any(todo):
                raise DomainError(f"{self.name}: points outside every branch image")
        return float(out) if out.ndim == 0 else out

    __call__ = eval

    def on_branch(self, j: int, y):
        """Value at ``y = tau_j(x)``, using branch j's formula when piecewise."""
        if self.pieces is None:
            return self.eval(y)
        y = np.asarray(y, dtype=float)
        self._check(y, *self.images[j])
        out = np.asarray(self.pieces[j](y), dtype=float)
        return float(out) if out.ndim == 0 else out

    def admissible(self, j: int, y) -> np.ndarray:
        """Mask of points where branch j's contribution is defined."""
        y = np.asarray(y, dtype=float)
        lo, hi = self.domain if self.pieces is None else self.images[j]
        return (y >= lo - _EDGE_SLACK) & (y <= hi + _EDGE_SLACK)


def cantor_distance(x):
    """Minus the distance from ``x`` to the middle-thirds Cantor set.

    Ternary descent: while ``x`` sits in a retained third it is rescaled
    into [0, 1]; the first time it falls in a removed middle third the
    distance is the distance to that gap's endpoints, scaled back.
    """
    xa = np.atleast_1d(np.asarray(x, dtype=float)).copy()
    if np.any(xa < 0.0) or np.any(xa > 1.0) or np.any(np.isnan(xa)):
        raise DomainError("cantor_distance is defined on [0, 1]")
    dist = np.zeros_like(xa)
    active = np.ones(xa.shape, dtype=bool)
    scale = 1.0
    for _ in range(60):
        gap = active & (xa > 1 / 3) & (xa < 2 / 3)
        dist[gap] = scale * np.minimum(xa[gap] - 1 / 3, 2 / 3 - xa[gap])
        active &= ~gap
        if not active.any():
            break
        left = active & (xa <= 1 / 3)
        right = active & (xa >= 2 / 3)
        xa[left] *= 3.0
        xa[right] = 3.0 * xa[right] - 2.0
        np.clip(xa, 0.0, 1.0, out=xa)
        scale /= 3.0
    out = -dist
    return float(out[0]) if np.ndim(x) == 0 else out


def cantor_distance_trunc(x, n: int):
    """Minus the distance to the 2**n level-n points 1/2 + sum a_i 3**-i, a_i = +-1.

    The two subtrees below a node are mirror images about it, so choosing
    each digit by the side of ``x`` is optimal: O(n) instead of O(2**n).
    """
    if not (isinstance(n, (int, np.integer)) and 1 <= n <= 40):
        raise ParameterError(f"truncation level must be an integer in [1, 40], got {n!r}")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0.0) or np.any(xa > 1.0):
        raise DomainError("cantor_distance_trunc is defined on [0, 1]")
    c = np.full(xa.shape, 0.5)
    for i in range(1, n + 1):
        c = c + np.where(xa >= c, 3.0**-i, -(3.0**-i))
    out = -np.abs(xa - c)
    return float(out) if out.ndim == 0 else out


def _farey_log_derivative(y):
    y = np.asarray(y, dtype=float)
    ya = np.atleast_1d(y)
    out = np.empty_like(ya)
    left = ya <= 0.5
    out[left] = -2.0 * np.log1p(-ya[left])
    out[~left] = -2.0 * np.log(ya[~left])
    return out.reshape(y.shape) if y.ndim else float(out[0])


def matrix_potential(a1: Matrix2, a2: Matrix2, t: float = 1.0) -> Potential:
    """Half log-derivative of the inverse Möbius branch plus half log det,
    piecewise on the two branch images; ``a2`` is scaled by ``t``."""
    if not t > 0:
        raise ParameterError(f"scale t must be positive, got {t}")
    for m in (a1, a2):
        if m.det <= 0:
            raise ConstructionError(f"matrix {m} has nonpositive determinant")
    sys = mobius_system(a1, a2)
    log_dets = (math.log(a1.det), math.log(t * t * a2.det))

    def make_piece(m: Matrix2, log_det: float):
        al, _, ga, _ = mobius_coefficients(m)
        det = m.det

        def piece(y):
            y = np.asarray(y, dtype=float)
            # |(tau^-1)'(y)| = det / (alpha - gamma y)^2
            return 0.5 * (math.log(det) - 2.0 * np.log(np.abs(al - ga * y)) + log_det)

        return piece

    pieces = (make_piece(a1, log_dets[0]), make_piece(a2, log_dets[1]))
    images = tuple(b.image for b in sys.branches)
    params = (a1.a, a1.b, a1.c, a1.d, a2.a, a2.b, a2.c, a2.d, float(t))
    return Potential(None, "matrix_pot", False, INTERVAL, None, None, sys.working_interval, pieces, images, params,
                     extra={"a1": a1, "a2": a2, "t": float(t)})


def self_subaction_potential(alpha: float, beta: float) -> Potential:
    """Symmetric tent-like potential that is its own calibrated subaction (m = beta)."""
    if not alpha > 0:
        raise ParameterError(f"alpha must be positive, got {alpha}")

    def u(x):
        x = np.asarray(x, dtype=float)
        return beta - alpha * np.abs(np.minimum(x, 1.0 - x) - 1.0 / 3.0)

    return Potential(u, "self_subaction", True, PERIODIC, float(beta), (1 / 3, 2 / 3), params=(alpha, beta))


def _sin_sq(x):
    return np.sin(2 * np.pi * np.asarray(x, dtype=float)) ** 2


def _sin(x):
    return np.sin(2 * np.pi * np.asarray(x, dtype=float))


def _quadratic_third(x):
    return -((np.asarray(x, dtype=float) - 1 / 3) ** 2)


def _quartic_pair(x):
    x = np.asarray(x, dtype=float)
    return -((x - 1 / 3) ** 2) * (x - 2 / 3) ** 2


def _octic(x):
    x = np.asarray(x, dtype=float)
    return -((x * (x - 1 / 3) * (x - 2 / 3) * (x - 1)) ** 2)


def _nparams(name: str, params: Sequence[float], allowed: Sequence[int]) -> None:
    if len(params) not in allowed:
        raise ParameterError(f"{name} takes {' or '.join(map(str, allowed))} parameters, got {len(params)}")


CATALOG_NAMES = (
    "quadratic_third", "sin_sq", "sin", "log_farey", "neg_log_farey", "quartic_pair",
    "octic", "cantor_dist", "cantor_dist_trunc", "matrix_pot", "self_subaction",
)


def catalog(name: str, params: Sequence[float] = ()) -> Potential:
    """Look up a potential by name; see ``CATALOG_NAMES``."""
    params = tuple(float(p) for p in params)
    if name == "quadratic_third":
        _nparams(name, params, [0])
        return Potential(_quadratic_third, name, False, INTERVAL, -2 / 63, (1 / 7, 2 / 7, 4 / 7))
    if name == "sin_sq":
        _nparams(name, params, [0])
        return Potential(_sin_sq, name, True, PERIODIC, 0.75, (1 / 3, 2 / 3))
    if name == "sin":
        _nparams(name, params, [0])
        m = float(np.mean(_sin(np.array(SIN_ORBIT))))
        return Potential(_sin, name, False, INTERVAL, m, SIN_ORBIT)
    if name == "log_farey":
        _nparams(name, params, [0])
        m = 0.5 * (_farey_log_derivative(FAREY_X0) + _farey_log_derivative(FAREY_X1))
        return Potential(_farey_log_derivative, name, True, INTERVAL, m, (FAREY_X0, FAREY_X1))
    if name == "neg_log_farey":
        _nparams(name, params, [0])
        return Potential(lambda y: -_farey_log_derivative(y), name, True, INTERVAL, 0.0, (0.0, 1.0))
    if name == "quartic_pair":
        _nparams(name, params, [0])
        return Potential(_quartic_pair, name, True, PERIODIC, 0.0, (1 / 3, 2 / 3))
    if name == "octic":
        _nparams(name, params, [0])
        return Potential(_octic, name, True, PERIODIC, 0.0, (0.0, 1 / 3, 2 / 3))
    if name == "cantor_dist":
        _nparams(name, params, [0])
        # m = 0 is taken as known without a proof here; K contains {0}, {1} and {1/3, 2/3}
        return Potential(cantor_distance, name, True, INTERVAL, 0.0, (0.0, 1 / 3, 2 / 3, 1.0),
                         note="known_m asserted, not proved")
    if name == "cantor_dist_trunc":
        _nparams(name, params, [1])
        n = int(params[0])
        if n != params[0]:
            raise ParameterError(f"truncation level must be an integer, got {params[0]}")
        return Potential(lambda x: cantor_distance_trunc(x, n), name, True, INTERVAL, params=params)
    if name == "matrix_pot":
        _nparams(name, params, [8, 9])
        t = params[8] if len(params) == 9 else 1.0
        return matrix_potential(Matrix2.of(params[:4]), Matrix2.of(params[4:8]), t)
    if name == "self_subaction":
        _nparams(name, params, [2])
        return self_subaction_potential(*params)
    raise CatalogError(f"unknown potential {name!r}; choose from {', '.join(CATALOG_NAMES)}")


def constant_potential(c: float, mode: str = INTERVAL) -> Potential:
    """A constant potential; degenerate input used by tests and sanity runs."""
    return Potential(lambda x: np.full(np.shape(x), float(c)), "constant", True, mode, float(c), params=(c,))
