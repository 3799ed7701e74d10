"""Sampled real functions on a uniform grid.

Two layouts are supported:

* ``interval``: nodes ``lo + (hi - lo) * i / (N - 1)`` for ``i = 0..N-1``.
  The default domain is ``[0, 1]``; IFS-only systems use a sub-interval.
* ``periodic``: nodes ``i / N`` on the circle, ``x = 1`` identified with 0.

Evaluation between nodes is piecewise linear. Linear interpolation is a
convex combination of samples, so every operator built from it stays
monotone and nonexpansive in the sup norm.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, ParameterError, ShapeError

PERIODIC = "periodic"
INTERVAL = "interval"
MODES = (PERIODIC, INTERVAL)

# rounding slack accepted at the domain boundary
_EDGE_SLACK = 1e-12


def grid_nodes(n: int, mode: str, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    if mode == PERIODIC:
        return np.arange(n) / n
    xs = lo + (hi - lo) * (np.arange(n) / (n - 1))
    xs[0], xs[-1] = lo, hi
    return xs


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Immutable samples of a real function on a uniform grid."""

    values: np.ndarray
    mode: str = INTERVAL
    lo: float = 0.0
    hi: float = 1.0
    x: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1:
            raise ShapeError("values must be one-dimensional")
        if vals.size < 2:
            raise ParameterError(f"resolution must be >= 2, got {vals.size}")
        if self.mode not in MODES:
            raise ParameterError(f"unknown mode {self.mode!r}")
        if self.mode == PERIODIC and (self.lo, self.hi) != (0.0, 1.0):
            raise ParameterError("periodic grids live on [0, 1]")
        if not self.lo < self.hi:
            raise ParameterError(f"empty domain [{self.lo}, {self.hi}]")
        if not np.all(np.isfinite(vals)):
            raise ParameterError("grid values must be finite")
        vals.setflags(write=False)
        xs = grid_nodes(vals.size, self.mode, self.lo, self.hi)
        xs.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "x", xs)

    @classmethod
    def from_function(cls, func, n: int, mode: str = INTERVAL, lo: float = 0.0, hi: float = 1.0):
        xs = grid_nodes(n, mode, lo, hi)
        return cls(np.asarray(func(xs), dtype=float) * np.ones(n), mode, lo, hi)

    @classmethod
    def constant(cls, c: float, n: int, mode: str = INTERVAL, lo: float = 0.0, hi: float = 1.0):
        return cls(np.full(n, float(c)), mode, lo, hi)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def spacing(self) -> float:
        if self.mode == PERIODIC:
            return 1.0 / self.n
        return (self.hi - self.lo) / (self.n - 1)

    def like(self, values) -> GridFunction:
        """A new grid function on the same grid."""
        return GridFunction(values, self.mode, self.lo, self.hi)

    def same_grid(self, other: GridFunction) -> bool:
        return (self.n, self.mode, self.lo, self.hi) == (other.n, other.mode, other.lo, other.hi)

    def node_index(self, x: float) -> int | None:
        """Index of the node equal to ``x`` (to rounding), else None."""
        t = (x - self.lo) / self.spacing
        i = int(round(t))
        if abs(t - i) > 1e-9:
            return None
        if self.mode == PERIODIC:
            return i % self.n
        return i if 0 <= i < self.n else None

    def eval(self, x):
        """Piecewise-linear interpolant at ``x`` (scalar or array)."""
        xa = np.asarray(x, dtype=float)
        if np.any(xa < self.lo - _EDGE_SLACK) or np.any(xa > self.hi + _EDGE_SLACK) or np.any(np.isnan(xa)):
            raise DomainError(f"points outside [{self.lo}, {self.hi}]")
        xa = np.clip(xa, self.lo, self.hi)
        if self.mode == PERIODIC:
            xp = np.append(self.x, 1.0)
            fp = np.append(self.values, self.values[0])
        else:
            xp, fp = self.x, self.values
        out = np.interp(xa, xp, fp)
        return float(out) if out.ndim == 0 else out

    __call__ = eval

    def to_csv(self, path) -> None:
        write_csv(path, {"x": self.x, "value": self.values})

    @classmethod
    def from_csv(cls, path, mode: str = INTERVAL, column: str = "value") -> GridFunction:
        cols = read_csv(path)
        if column not in cols:
            raise ShapeError(f"no column {column!r} in {path}")
        xs, vals = cols["x"], cols[column]
        if mode == PERIODIC:
            return cls(vals, PERIODIC)
        return cls(vals, INTERVAL, float(xs[0]), float(xs[-1]))


def sup_normalize(gf: GridFunction) -> tuple[GridFunction, float]:
    """Shift ``gf`` so that its maximum is exactly 0; also return the shift."""
    top = float(np.max(gf.values))
    return gf.like(gf.values - top), top


def sup_distance(f: GridFunction, g: GridFunction) -> float:
    if not f.same_grid(g):
        raise ShapeError(f"grid mismatch: ({f.n}, {f.mode}) vs ({g.n}, {g.mode})")
    return float(np.max(np.abs(f.values - g.values)))


def write_csv(path, columns: dict) -> None:
    """Write equal-length numeric columns with a header row, 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    cols = [np.asarray(columns[k]) for k in names]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for row in zip(*cols):
            w.writerow([_fmt(v) for v in row])


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


_BOOLS = {"true": 1.0, "false": 0.0}


def read_csv(path) -> dict[str, np.ndarray]:
    """Columns of a file written by ``write_csv``; true/false read as 1/0."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    return {name: np.array([_BOOLS[r[i]] if r[i] in _BOOLS else float(r[i]) for r in body])
            for i, name in enumerate(header)}
