import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import system_for
from subaction.errors import ParameterError
from subaction.grid import PERIODIC
from subaction.jsr import EXAMPLE_1, EXAMPLE_2
from subaction.oracle import (best_periodic_value, doubling_orbits, ifs_orbit, lyndon_words, periodic_candidates,
                              word_fixed_point)
from subaction.potentials import CATALOG_NAMES, catalog, matrix_potential
from subaction.systems import Branch, BranchSystem, doubling_system, farey_like_system, mobius_system

PARAMS = {"cantor_dist_trunc": (10,), "matrix_pot": (2, 1, 2, 2, 2, 2, 1, 2), "self_subaction": (0.4, 1.0)}


def point_sets(certs):
    return [sorted(c.points) for c in certs]


def test_doubling_examples():
    assert point_sets(doubling_orbits(1)) == [[0.0]]
    assert [1 / 3, 2 / 3] in point_sets(doubling_orbits(2, exact=True))
    assert [0.0] not in point_sets(doubling_orbits(2, exact=True))
    p3 = point_sets(doubling_orbits(3))
    assert [1 / 7, 2 / 7, 4 / 7] in p3 and [3 / 7, 5 / 7, 6 / 7] in p3 and [0.0] in p3
    assert len(p3) == 3
    for p in (0, 21, 2.5):
        with pytest.raises(ParameterError):
            doubling_orbits(p)


@given(st.integers(1, 14))
def test_necklace_count(p):
    orbits = doubling_orbits(p)
    assert sum(c.period for c in orbits) == 2**p - 1
    assert all(p % c.period == 0 for c in orbits)


@given(st.integers(1, 12))
def test_doubling_orbits_are_cyclic(p):
    for c in doubling_orbits(p):
        nxt = (2 * np.array(c.points)) % 1.0
        assert np.allclose(nxt, np.roll(c.points, -1), atol=1e-12)


def test_lyndon_words():
    assert lyndon_words(1) == [(0,), (1,)]
    assert lyndon_words(2) == [(0, 1)]
    assert len(lyndon_words(3)) == 2
    # necklace counting: sum over d | p of d * L(d) = 2^p
    for p in range(1, 9):
        assert sum(d * len(lyndon_words(d)) for d in range(1, p + 1) if p % d == 0) == 2**p


def test_sin_sq_oracle():
    A = catalog("sin_sq")
    best = best_periodic_value(A, system_for(A), 4)
    assert sorted(best.points) == pytest.approx([1 / 3, 2 / 3], abs=1e-12)
    assert best.birkhoff_average == pytest.approx(0.75, abs=1e-12)


def test_sin_oracle():
    A = catalog("sin")
    best = best_periodic_value(A, system_for(A), 6)
    assert sorted(best.points) == pytest.approx([1 / 15, 2 / 15, 4 / 15, 8 / 15], abs=1e-12)
    assert best.birkhoff_average == pytest.approx(0.4841, abs=1e-4)


def test_jsr_example_two_oracle():
    sys, A = mobius_system(*EXAMPLE_2), matrix_potential(*EXAMPLE_2)
    best = best_periodic_value(A, sys, 4)
    assert best.word == (0,)
    assert best.points[0] == pytest.approx(math.sqrt(2) - 1, abs=1e-12)
    assert best.birkhoff_average == pytest.approx(math.log(2 + math.sqrt(2)), abs=1e-12)


def test_ifs_orbits_are_cyclic():
    sys, A = mobius_system(*EXAMPLE_1), matrix_potential(*EXAMPLE_1)
    for c in periodic_candidates(A, sys, 6):
        pts = c.points
        for k in range(c.period):
            # y_k = tau_{w_k}(y_{k+1}), read cyclically
            assert sys.branches[c.word[k]].map(pts[(k + 1) % c.period]) == pytest.approx(pts[k], abs=1e-12)
        assert c.birkhoff_average == pytest.approx(
            np.mean([A.on_branch(c.word[k], pts[k]) for k in range(c.period)]), abs=1e-15)


def test_farey_oracle_includes_parabolic_point():
    sys = farey_like_system()
    neg = best_periodic_value(catalog("neg_log_farey"), sys, 8)
    assert neg.period == 1 and neg.birkhoff_average == pytest.approx(0.0, abs=1e-12)
    pos = best_periodic_value(catalog("log_farey"), sys, 8)
    assert pos.period == 2
    assert pos.birkhoff_average == pytest.approx(catalog("log_farey").known_m, abs=1e-12)


def test_word_fixed_point_failure_warns():
    # a branch mapping everything outside [0, 1] has no fixed point there
    off = Branch(lambda x: np.full_like(np.asarray(x, dtype=float), 2.0), (0.0, 1.0))
    sys = BranchSystem((off, off), name="broken")
    assert word_fixed_point(sys, (0,)) is None
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        assert ifs_orbit(sys, catalog("quadratic_third"), (0,)) is None
    assert rec and issubclass(rec[0].category, RuntimeWarning)


def test_p_max_validation():
    with pytest.raises(ParameterError):
        best_periodic_value(catalog("sin_sq"), doubling_system(PERIODIC), 0)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_exactness_on_catalog(name):
    A = catalog(name, PARAMS.get(name, ()))
    sys = mobius_system(*EXAMPLE_1) if name == "matrix_pot" else system_for(A)
    best = best_periodic_value(A, sys, 8)
    if A.known_mather is None or A.known_m is None or len(A.known_mather) > 8:
        return
    if name in ("octic", "cantor_dist"):
        # several maximizing orbits; the oracle must hit known_m on one of them
        assert best.birkhoff_average == pytest.approx(A.known_m, abs=1e-12)
        assert set(np.round(best.points, 10)) <= set(np.round(A.known_mather, 10))
        return
    if name == "neg_log_farey":
        assert best.birkhoff_average == pytest.approx(A.known_m, abs=1e-12)
        return
    assert sorted(best.points) == pytest.approx(sorted(A.known_mather), abs=1e-10)
    assert best.birkhoff_average == pytest.approx(A.known_m, abs=1e-12)


def test_certificate_json_shape():
    c = doubling_orbits(2, exact=True)[0]
    assert set(c.as_dict()) == {"period", "points", "word", "average"}
