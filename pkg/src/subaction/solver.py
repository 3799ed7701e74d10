"""The 1/2 iterative procedure for calibrated subactions.

For a potential ``A`` and inverse branches ``tau_j`` the Bellman max step is

    (B f)(x) = max_j [A(tau_j x) + f(tau_j x)]

and one half step is

    G f = (B f + f) / 2 - c,    c = max over the grid of (B f + f) / 2.

A calibrated subaction V with maximal value m is a fixed point of G with
c = m / 2. B is monotone and commutes with constants, so (B + I) / 2 is
nonexpansive in the sup norm; the averaging is what makes plain iteration
converge.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np

from .errors import CoverageError, NumericError, ParameterError, ShapeError
from .grid import INTERVAL, PERIODIC, GridFunction, grid_nodes, sup_distance, sup_normalize, write_csv
from .potentials import Potential
from .systems import BranchSystem

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    n: int = 10_000
    tol: float = 1e-7
    max_iter: int = 2000
    realizer_tie_tol: float = 1e-10
    # False: run exactly max_iter steps (the fixed-count runs of the figures)
    stop_on_tol: bool = True

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 2):
            raise ParameterError(f"grid resolution must be an integer >= 2, got {self.n!r}")
        if not self.tol > 0:
            raise ParameterError(f"tol must be positive, got {self.tol}")
        if not (isinstance(self.max_iter, (int, np.integer)) and self.max_iter >= 1):
            raise ParameterError(f"max_iter must be >= 1, got {self.max_iter!r}")
        if not self.realizer_tie_tol >= 0:
            raise ParameterError(f"realizer_tie_tol must be >= 0, got {self.realizer_tie_tol}")


@dataclass(frozen=True, eq=False)
class SubactionResult:
    V: GridFunction
    m_estimate: float
    realizer: np.ndarray
    R: GridFunction
    iterations: int
    residual: float
    converged: bool
    last_gap: float
    m_mean: float
    gaps: tuple[float, ...] = ()

    def summary(self) -> dict:
        return {
            "m_estimate": self.m_estimate,
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "last_gap": self.last_gap,
            "m_mean": self.m_mean,
        }


def zero_function(sys: BranchSystem, n: int) -> GridFunction:
    """The zero initial condition on the grid matching ``sys``."""
    lo, hi = sys.working_interval
    if sys.domain_mode == PERIODIC:
        return GridFunction.constant(0.0, n, PERIODIC)
    return GridFunction.constant(0.0, n, INTERVAL, lo, hi)


def _check_grid(f: GridFunction, sys: BranchSystem) -> None:
    if f.mode != sys.domain_mode:
        raise ShapeError(f"grid mode {f.mode} does not match system mode {sys.domain_mode}")
    if f.mode == INTERVAL and (f.lo, f.hi) != tuple(sys.working_interval):
        raise ShapeError(f"grid domain [{f.lo}, {f.hi}] differs from working interval {sys.working_interval}")


class _Bellman:
    """Branch points and potential values for a fixed grid, reused across steps."""

    def __init__(self, x: np.ndarray, sys: BranchSystem, A: Potential):
        self.points = []
        self.pot = []
        for j, br in enumerate(sys.branches):
            y = np.asarray(br.map(x), dtype=float)
            ok = A.admissible(j, y)
            a = np.full(y.shape, -np.inf)
            if ok.any():
                a[ok] = A.on_branch(j, y[ok])
            self.points.append(y)
            self.pot.append(a)
        cover = np.any([np.isfinite(a) for a in self.pot], axis=0)
        if not cover.all():
            bad = x[~cover]
            raise CoverageError(f"no admissible branch at {bad.size} points, e.g. x = {bad[0]:.6g}")

    def candidates(self, f: GridFunction) -> np.ndarray:
        return np.array([a + f.eval(y) for a, y in zip(self.pot, self.points)])

    def apply(self, f: GridFunction, tie_tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
        cand = self.candidates(f)
        best = cand.max(axis=0)
        realizer = np.argmax(cand >= best - tie_tol, axis=0)
        return best, realizer


def bellman_max(f: GridFunction, sys: BranchSystem, A: Potential, tie_tol: float = 1e-10):
    """``g(x) = max_j [A(tau_j x) + f(tau_j x)]`` and the argmax branch per node.

    Ties within ``tie_tol`` go to the lowest branch index.
    """
    _check_grid(f, sys)
    best, realizer = _Bellman(f.x, sys, A).apply(f, tie_tol)
    return f.like(best), realizer


def _half(f: GridFunction, bell: _Bellman, tie_tol: float):
    best, realizer = bell.apply(f, tie_tol)
    raw = 0.5 * (best + f.values)
    if not np.all(np.isfinite(raw)):
        raise NumericError("non-finite value in the half step")
    c = float(raw.max())
    return f.like(raw - c), realizer, c, raw


def half_step(f: GridFunction, sys: BranchSystem, A: Potential, tie_tol: float = 1e-10, normalize: bool = True):
    """One application of the 1/2 procedure.

    Returns ``(G f, realizer, c)``. With ``normalize=False`` the first entry
    is the raw average ``(B f + f) / 2`` before the constant is removed.
    """
    _check_grid(f, sys)
    g, realizer, c, raw = _half(f, _Bellman(f.x, sys, A), tie_tol)
    if not normalize:
        g = f.like(raw)
    return g, realizer, c


def solve(sys: BranchSystem, A: Potential, f0: Optional[GridFunction] = None,
          cfg: SolverConfig = SolverConfig()) -> SubactionResult:
    """Iterate the half step from ``f0`` (zero by default).

    Stops once consecutive iterates are within ``cfg.tol`` in sup norm and
    the geometric tail estimate is below ``cfg.tol / 2``, or after
    ``cfg.max_iter`` steps. The second test matters when the contraction
    ratio exceeds 1/2: the gap alone then underestimates the distance to
    the fixed point, and with it the errors in m and R. ``m_estimate`` is twice the last
    normalizing constant; ``m_mean`` is the grid mean of ``BV - V``.
    """
    f = zero_function(sys, cfg.n) if f0 is None else f0
    _check_grid(f, sys)
    if not np.all(np.isfinite(f.values)):
        raise NumericError("initial condition is not finite")
    bell = _Bellman(f.x, sys, A)
    gaps = []
    c = 0.0
    for _ in range(cfg.max_iter):
        g, _, c, _ = _half(f, bell, cfg.realizer_tie_tol)
        gaps.append(sup_distance(g, f))
        f = g
        converged = gaps[-1] < cfg.tol and error_estimate(gaps) < 0.5 * cfg.tol
        if converged and cfg.stop_on_tol:
            break
    V = f
    m = 2.0 * c
    best, realizer = bell.apply(V, cfg.realizer_tie_tol)
    diff = best - V.values
    R = compute_R(V, m, sys, A)
    log.debug("%s: %d iterations, gap %.3g, m %.12g", A.name, len(gaps), gaps[-1], m)
    return SubactionResult(V, m, realizer, R, len(gaps), float(diff.max() - diff.min()), converged,
                           gaps[-1], float(diff.mean()), tuple(gaps))


def error_estimate(gaps) -> float:
    """Geometric estimate of the distance from the last iterate to the fixed point.

    With contraction ratio r the tail after a gap g sums to g r / (1 - r).
    The ratio is the largest of the last three gap ratios; with fewer than
    two gaps, or a ratio near 1, the estimate is infinite unless the gap is 0.
    """
    if gaps[-1] == 0.0:
        return 0.0
    if len(gaps) < 2:
        return float("inf")
    tail = gaps[-4:]
    r = max(b / a if a > 0 else 1.0 for a, b in zip(tail[:-1], tail[1:]))
    if r >= 0.999:
        return float("inf")
    return gaps[-1] * r / (1.0 - r)


def _extend(V: GridFunction, m: float, sys: BranchSystem, A: Potential, s: np.ndarray) -> np.ndarray:
    """Calibrated extension ``max_j [A(tau_j s) + V(tau_j s)] - m`` at arbitrary points."""
    vals = []
    for j, br in enumerate(sys.branches):
        y = np.asarray(br.map(s), dtype=float)
        vals.append(A.on_branch(j, y) + V.eval(y))
    return np.max(vals, axis=0) - m


def compute_R(V: GridFunction, m: float, sys: BranchSystem, A: Potential) -> GridFunction:
    """``R(y) = V(T y) - V(y) - A(y) + m`` on the grid.

    Without a global forward map, ``y`` in the image of branch j has
    ``T y = tau_j^{-1}(y)``, which may leave the working interval; there V
    is replaced by its calibrated extension. Where images overlap the
    smaller value is kept. Nodes in a gap between images have no preimage
    relation and get the largest finite R, so they never count as Mather.
    """
    y = V.x
    if sys.forward is not None:
        return V.like(V.eval(sys.forward(y)) - V.values - A.eval(y) + m)
    R = np.full(y.shape, np.inf)
    for j, br in enumerate(sys.branches):
        lo, hi = br.image
        sel = (y >= lo - 1e-12) & (y <= hi + 1e-12)
        if not sel.any():
            continue
        s = np.clip(br.inverse(y[sel]), 0.0, 1.0)
        Rj = _extend(V, m, sys, A, s) - V.values[sel] - A.on_branch(j, np.clip(y[sel], lo, hi)) + m
        R[sel] = np.minimum(R[sel], Rj)
    finite = np.isfinite(R)
    R[~finite] = R[finite].max() if finite.any() else 0.0
    return V.like(R)


def branch_R(V: GridFunction, m: float, sys: BranchSystem, A: Potential) -> list[GridFunction]:
    """Per-branch deficiency on the source grid: ``V(s) - V(tau_j s) - A(tau_j s) + m``."""
    out = []
    for j, br in enumerate(sys.branches):
        y = np.asarray(br.map(V.x), dtype=float)
        out.append(V.like(V.values - V.eval(y) - A.on_branch(j, y) + m))
    return out


def mather_support(R: GridFunction, threshold: float) -> list[tuple[float, float]]:
    """Maximal runs of consecutive nodes with ``R < threshold`` as ``(x_lo, x_hi)``.

    On a periodic grid the node x = 1 (a copy of x = 0) closes the last run,
    so a run touching the wrap point reports ``x_hi = 1``; runs are not
    merged across the wrap.
    """
    if not threshold > 0:
        raise ParameterError(f"threshold must be positive, got {threshold}")
    xs, vals = R.x, R.values
    if R.mode == PERIODIC:
        xs = np.append(xs, 1.0)
        vals = np.append(vals, vals[0])
    low = vals < threshold
    runs = []
    i, n = 0, low.size
    while i < n:
        if low[i]:
            j = i
            while j + 1 < n and low[j + 1]:
                j += 1
            runs.append((float(xs[i]), float(xs[j])))
            i = j + 1
        else:
            i += 1
    return runs


def save_result(res: SubactionResult, prefix) -> tuple[Path, Path]:
    """Write ``prefix.csv`` (x, V, realizer, R) and the JSON sidecar ``prefix.json``."""
    prefix = Path(prefix)
    csv_path = prefix.with_name(prefix.name + ".csv")
    json_path = prefix.with_name(prefix.name + ".json")
    write_csv(csv_path, {"x": res.V.x, "V": res.V.values, "realizer": res.realizer, "R": res.R.values})
    json_path.write_text(json.dumps(res.summary(), indent=2) + "\n")
    return csv_path, json_path


def covers(runs: list[tuple[float, float]], point: float, slack: float = 0.0) -> bool:
    return any(lo - slack <= point <= hi + slack for lo, hi in runs)


Subaction = Union[GridFunction, Callable]


def verify_subaction(V: Subaction, m: float, sys: BranchSystem, A: Potential, points=None) -> float:
    """``sup |max_j [A(tau_j x) + V(tau_j x)] - V(x) - m|`` over ``points``.

    ``V`` may be a grid function (interpolated) or any vectorized callable
    (exact evaluation). Points default to the grid nodes, or to 10**4
    uniform points of the working interval for a callable.
    """
    if points is None:
        if isinstance(V, GridFunction):
            points = V.x
        else:
            lo, hi = sys.working_interval
            points = grid_nodes(10_000, INTERVAL, lo, hi)
    x = np.asarray(points, dtype=float)
    cand = []
    for j, br in enumerate(sys.branches):
        y = np.asarray(br.map(x), dtype=float)
        cand.append(A.on_branch(j, y) + np.asarray(V(y), dtype=float))
    res = np.max(cand, axis=0) - np.asarray(V(x), dtype=float) - m
    return float(np.max(np.abs(res)))


def bump_initial(epsilon: float, a: float, k: float = 1.0, n: int = 10_000, mode: str = INTERVAL) -> GridFunction:
    """Tent of height ``k * epsilon`` centered at ``a``, zero off ``[a - eps, a + eps]``."""
    if not 0 < a < 1:
        raise ParameterError(f"bump center must lie in (0, 1), got {a}")
    if not epsilon > 0:
        raise ParameterError(f"bump half-width must be positive, got {epsilon}")
    if a - epsilon < 0 or a + epsilon > 1:
        raise ParameterError(f"bump support [{a - epsilon}, {a + epsilon}] leaves [0, 1]")
    return GridFunction.from_function(lambda x: bump_value(x, epsilon, a, k), n, mode)


def bump_value(x, epsilon: float, a: float, k: float = 1.0):
    x = np.asarray(x, dtype=float)
    return np.maximum(0.0, k * (epsilon - np.abs(x - a)))


__all__ = [
    "SolverConfig", "SubactionResult", "bellman_max", "half_step", "solve", "compute_R", "branch_R",
    "mather_support", "verify_subaction", "save_result", "error_estimate", "bump_initial", "bump_value", "zero_function", "sup_normalize",
]
