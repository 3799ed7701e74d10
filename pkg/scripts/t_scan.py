"""Plot data for m(A, t): the example-1 pair with A2 scaled by t."""

import argparse
import math
from pathlib import Path

import numpy as np

from subaction import analytic as an
from subaction.errors import UnsupportedParameterError
from subaction.grid import write_csv
from subaction.jsr import EXAMPLE_1, parse_range, t_scan
from subaction.solver import SolverConfig


def exact_m(t):
    try:
        return an.jsr_exact_parametric(0.5, t)[1]
    except UnsupportedParameterError:
        return math.nan


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--range", default="0.05:1.5:0.01", help="lo:hi:step")
    p.add_argument("--grid-n", type=int, default=10_000)
    p.add_argument("--out", default="out/t_scan.csv")
    args = p.parse_args(argv)
    ts = parse_range(args.range)
    res = t_scan(*EXAMPLE_1, ts, SolverConfig(n=args.grid_n))
    cols = {"t": ts, "m": [r.m for r in res], "m_exact": [exact_m(t) for t in ts],
            "converged": [r.converged for r in res]}
    write_csv(Path(args.out), cols)
    gaps = np.array(cols["m"]) - np.array(cols["m_exact"])
    print(f"{len(ts)} points -> {args.out}; max |m - exact| where exact exists: {np.nanmax(np.abs(gaps)):.2e}")
    print(f"window edges: t1 = {an.T1:.6f}, t2 = {an.T2:.6f}, t3 = {an.T3:.6f}")


if __name__ == "__main__":
    main()
