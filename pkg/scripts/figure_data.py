"""CSV plot data for the standard experiments, one file per figure."""

import argparse
import sys

from subaction.cli import main as cli

RUNS = [
    ("quadratic_15", ["compare", "--potential", "quadratic_third", "--iters", "15"]),
    ("quartic_pair_R_7", ["solve", "--potential", "quartic_pair", "--iters", "7"]),
    ("sin_sq_30", ["compare", "--potential", "sin_sq", "--iters", "30", "--bound", "1e-3"]),
    ("sin", ["compare", "--potential", "sin"]),
    ("farey_200", ["compare", "--potential", "log_farey", "--iters", "200"]),
    ("jsr_example1", ["jsr", "--a1", "2,1,2,2", "--a2", "2,2,1,2"]),
    ("ruelle_sin_sq", ["spectrum", "--potential", "sin_sq"]),
    ("cantor_conjecture", ["compare", "--potential", "cantor_dist", "--reference", "cantor_G"]),
    ("octic_basins", ["basins", "--potential", "octic", "--init", "zero;bump:0.01,1/5,1;bump:0.01,2/3,1"]),
]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out-dir", default="out/figures")
    args = p.parse_args(argv)
    codes = {}
    for name, cmd in RUNS:
        print(f"== {name}")
        codes[name] = cli(cmd + ["--out", f"{args.out_dir}/{name}"])
    # fixed-count runs stop short of tol and return 2 by design; only 1 is an error
    failed = [k for k, c in codes.items() if c == 1]
    if failed:
        print("errors:", ", ".join(failed), file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
