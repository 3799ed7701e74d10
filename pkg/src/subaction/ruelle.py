"""Principal eigenpair of the Ruelle operator by a log-domain 1/2 procedure.

With L f(x) = sum_j exp(A(tau_j x)) f(tau_j x), the map

    G~(g) = g/2 + (1/2) log L(e^g)

is nonexpansive in the sup norm (log L e^g is a log-sum-exp, hence monotone
and commuting with constants). Normalizing by the value at x = 1/2 gives an
iteration whose fixed point h satisfies L e^h = lambda e^h.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, NumericError, ParameterError
from .grid import GridFunction, sup_distance
from .potentials import Potential
from .solver import SolverConfig, _check_grid, zero_function
from .systems import BranchSystem

NORMALIZATION_POINT = 0.5
RATIO_POINT = 0.4


@dataclass(frozen=True, eq=False)
class RuelleResult:
    h: GridFunction
    lam: float
    residual: float
    iterations: int
    converged: bool
    lambda_median: float
    lambda_fixed: float

    @property
    def phi(self) -> np.ndarray:
        return np.exp(self.h.values)

    def summary(self) -> dict:
        return {"lambda": self.lam, "residual": self.residual, "iterations": self.iterations,
                "converged": self.converged, "lambda_median": self.lambda_median,
                "lambda_fixed": self.lambda_fixed}


def _branch_terms(g: GridFunction, x: np.ndarray, sys: BranchSystem, A: Potential) -> np.ndarray:
    """Rows ``A(tau_j x) + g(tau_j x)``, -inf where branch j is not admissible."""
    rows = []
    for j, br in enumerate(sys.branches):
        y = np.asarray(br.map(x), dtype=float)
        ok = A.admissible(j, y)
        r = np.full(y.shape, -np.inf)
        if ok.any():
            r[ok] = A.on_branch(j, y[ok]) + g.eval(y[ok])
        rows.append(r)
    return np.array(rows)


def _logsumexp(rows: np.ndarray) -> np.ndarray:
    top = rows.max(axis=0)
    return top + np.log(np.exp(rows - top).sum(axis=0))


def ruelle_apply(f: GridFunction, sys: BranchSystem, A: Potential) -> GridFunction:
    """``L f(x) = sum_j exp(A(tau_j x)) f(tau_j x)`` at the grid nodes."""
    _check_grid(f, sys)
    if np.any(f.values < 0):
        raise DomainError("the transfer operator is applied to nonnegative functions")
    out = np.zeros(f.n)
    for j, br in enumerate(sys.branches):
        y = np.asarray(br.map(f.x), dtype=float)
        ok = A.admissible(j, y)
        out[ok] += np.exp(A.on_branch(j, y[ok])) * f.eval(y[ok])
    return f.like(out)


def log_transfer(g: GridFunction, sys: BranchSystem, A: Potential, x=None) -> np.ndarray:
    """``log L(e^g)`` at ``x`` (grid nodes by default), computed as a log-sum-exp."""
    x = g.x if x is None else np.atleast_1d(np.asarray(x, dtype=float))
    return _logsumexp(_branch_terms(g, x, sys, A))


def _normalization_index(g: GridFunction) -> int:
    i = g.node_index(NORMALIZATION_POINT)
    if i is None:
        raise ParameterError("x = 0.5 must be a grid node: use an even periodic or odd interval node count")
    return i


def half_log_step(g: GridFunction, sys: BranchSystem, A: Potential, normalize: bool = True) -> GridFunction:
    """``G~(g) - G~(g)(0.5)``; with ``normalize=False`` the unshifted ``G~(g)``."""
    _check_grid(g, sys)
    raw = 0.5 * g.values + 0.5 * log_transfer(g, sys, A)
    if not np.all(np.isfinite(raw)):
        raise NumericError("non-finite value in the log-domain step")
    if not normalize:
        return g.like(raw)
    return g.like(raw - raw[_normalization_index(g)])


def eigen_solve(sys: BranchSystem, A: Potential, cfg: SolverConfig = SolverConfig(),
                g0: Optional[GridFunction] = None) -> RuelleResult:
    """Iterate the normalized log step from ``g0`` (zero by default).

    lambda is the ratio ``L(e^h)(0.4) / e^{h(0.4)}``; the median ratio over
    the grid and ``exp(2c)`` from the last shift are kept as cross-checks.
    """
    g = zero_function(sys, cfg.n) if g0 is None else g0
    _check_grid(g, sys)
    i0 = _normalization_index(g)
    converged = False
    it = 0
    c = 0.0
    for it in range(1, cfg.max_iter + 1):
        raw = 0.5 * g.values + 0.5 * log_transfer(g, sys, A)
        if not np.all(np.isfinite(raw)):
            raise NumericError("non-finite value in the log-domain step")
        c = float(raw[i0])
        nxt = g.like(raw - c)
        gap = sup_distance(nxt, g)
        g = nxt
        if gap < cfg.tol:
            converged = True
            if cfg.stop_on_tol:
                break
    lt = log_transfer(g, sys, A)
    lam = float(np.exp(log_transfer(g, sys, A, RATIO_POINT)[0] - g.eval(RATIO_POINT)))
    phi = np.exp(g.values)
    residual = float(np.max(np.abs(np.exp(lt) - lam * phi)) / phi.max())
    lam_med = float(np.median(np.exp(lt - g.values)))
    return RuelleResult(g, lam, residual, it, converged, lam_med, float(np.exp(2 * c)))
