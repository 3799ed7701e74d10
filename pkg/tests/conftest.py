import sys
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from subaction.grid import GridFunction
from subaction.potentials import catalog
from subaction.solver import SolverConfig, solve
from subaction.systems import doubling_system, farey_like_system

settings.register_profile("default", max_examples=50, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# self_subaction has kinks at 1/3 and 2/3; 10002 is even and a multiple of 3,
# so the kinks and x = 1/2 are all grid nodes
KINK_ALIGNED_N = 10_002


def system_for(A):
    if A.name in ("log_farey", "neg_log_farey"):
        return farey_like_system()
    return doubling_system(A.domain_mode)


@lru_cache(maxsize=None)
def solved(name, params=(), n=10_000, max_iter=2000):
    """Converged solve from f0 = 0, cached across tests."""
    A = catalog(name, params)
    sys = system_for(A)
    return sys, A, solve(sys, A, None, SolverConfig(n=n, max_iter=max_iter))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def sample(func, n=10_000, mode="interval"):
    return GridFunction.from_function(func, n, mode)


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.RESULTS[number])
