"""Joint spectral radius of a pair of 2x2 matrices through m(A).

The pair induces two Möbius inverse branches on the projective line and a
potential built from their log-derivatives; rho(A1, A2) is read off as
exp(m(A)). The reduction needs conditions on the pair that are not
checked here beyond nonnegativity and positive determinants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import ParameterError, SubactionError
from .potentials import matrix_potential
from .solver import SolverConfig, SubactionResult, solve
from .systems import Matrix2, mobius_system

EXAMPLE_1 = (Matrix2(2, 1, 2, 2), Matrix2(2, 2, 1, 2))
EXAMPLE_2 = (Matrix2(2, 1, 2, 2), Matrix2(1, 1, 0.5, 1))

CAVEAT = "rho = exp(m) assumes the pair meets the conditions of the projective reduction; not verified"


@dataclass(frozen=True, eq=False)
class JsrResult:
    rho: float
    m: float
    subaction: Optional[SubactionResult]
    t: Optional[float] = None
    note: str = ""
    error: Optional[str] = None
    max_individual_radius: float = float("nan")

    @property
    def converged(self) -> bool:
        return self.subaction is not None and self.subaction.converged


def _positivity_note(a1: Matrix2, a2: Matrix2) -> str:
    if any(v <= 0 for m in (a1, a2) for v in (m.a, m.b, m.c, m.d)):
        return "matrix with zero entries; " + CAVEAT
    return CAVEAT


def joint_spectral_radius(a1: Matrix2, a2: Matrix2, cfg: SolverConfig = SolverConfig(), t: float = 1.0) -> JsrResult:
    """Solve for m(A) on the working interval of the pair (a1, t * a2)."""
    sys = mobius_system(a1, a2)
    A = matrix_potential(a1, a2, t)
    res = solve(sys, A, None, cfg)
    radii = max(a1.spectral_radius(), a2.scaled(t).spectral_radius())
    return JsrResult(math.exp(res.m_estimate), res.m_estimate, res, t, _positivity_note(a1, a2),
                     None, radii)


def t_scan(a1: Matrix2, a2: Matrix2, t_values: Iterable[float], cfg: SolverConfig = SolverConfig()) -> list[JsrResult]:
    """One result per t with a2 scaled by t; failures are recorded and the scan goes on."""
    out = []
    for t in t_values:
        t = float(t)
        try:
            if not t > 0:
                raise ParameterError(f"scale t must be positive, got {t}")
            out.append(joint_spectral_radius(a1, a2, cfg, t))
        except SubactionError as exc:
            out.append(JsrResult(float("nan"), float("nan"), None, t, "", str(exc)))
    return out


def parse_range(spec: str) -> np.ndarray:
    """``lo:hi:step`` to an inclusive array of values."""
    try:
        lo, hi, step = (float(s) for s in spec.split(":"))
    except ValueError:
        raise ParameterError(f"range must look like lo:hi:step, got {spec!r}") from None
    if not step > 0 or hi < lo:
        raise ParameterError(f"bad range {spec!r}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)
