"""Print the headline numbers next to their reference values."""

import math

import numpy as np

from subaction import analytic as an
from subaction.grid import PERIODIC
from subaction.jsr import EXAMPLE_1, EXAMPLE_2, joint_spectral_radius
from subaction.oracle import best_periodic_value
from subaction.potentials import catalog
from subaction.ruelle import eigen_solve
from subaction.solver import SolverConfig, solve
from subaction.systems import doubling_system, farey_like_system


def row(label, value, reference):
    print(f"{label:<34} {value:>16.10f} {reference:>16.10f} {value - reference:>+10.2e}")


def main():
    print(f"{'quantity':<34} {'computed':>16} {'reference':>16} {'diff':>10}")
    fixed15 = SolverConfig(max_iter=15, stop_on_tol=False)
    row("quadratic m, 15 steps", solve(doubling_system(), catalog("quadratic_third"), None, fixed15).m_estimate,
        an.QUADRATIC_M)
    row("quadratic m, converged", solve(doubling_system(), catalog("quadratic_third")).m_estimate, an.QUADRATIC_M)
    row("sin^2 m", solve(doubling_system(PERIODIC), catalog("sin_sq")).m_estimate, an.SINSQ_M)
    row("sin m", solve(doubling_system(), catalog("sin")).m_estimate, an.SIN_M)
    row("Farey m", solve(farey_like_system(), catalog("log_farey")).m_estimate, an.FAREY_M)
    row("JSR example 1 rho", joint_spectral_radius(*EXAMPLE_1).rho, (3 + math.sqrt(17)) / 2)
    row("JSR example 2 rho", joint_spectral_radius(*EXAMPLE_2).rho, 2 + math.sqrt(2))
    row("JSR t = 0.91 m", joint_spectral_radius(*EXAMPLE_1, t=0.91).m, an.case2_m(0.91))
    sys, A = doubling_system(PERIODIC), catalog("sin_sq")
    for k in (10, 20):
        res = eigen_solve(sys, A, SolverConfig(max_iter=k, stop_on_tol=False))
        row(f"Ruelle lambda (sin^2), {k} steps", res.lam, 3.472)
    row("Ruelle lambda (sin^2), converged", eigen_solve(sys, A).lam, 3.472)
    best = best_periodic_value(catalog("sin"), doubling_system(), 6)
    row("sin oracle average", best.birkhoff_average, an.SIN_M)
    print("sin oracle orbit:", np.round(best.points, 6).tolist())


if __name__ == "__main__":
    main()
