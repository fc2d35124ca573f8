from __future__ import annotations

import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvtbounds.oracle import (
    BudgetExceeded,
    congruence_class_bound,
    congruence_class_extremum,
    count_J,
    count_J_congruential,
    empirical_growth,
    growth_series_csv,
    profile_counts,
    profile_estimate,
)


def _brute_J(s: int, k: int, X: int, lo: int = 1) -> int:
    # independent oracle: enumerate all 2s-tuples
    n = 0
    vals = range(lo, lo + X)
    for xs in itertools.product(vals, repeat=s):
        px = [sum(x**j for x in xs) for j in range(1, k + 1)]
        for ys in itertools.product(vals, repeat=s):
            if px == [sum(y**j for y in ys) for j in range(1, k + 1)]:
                n += 1
    return n


def test_profiles_single_variable():
    pc = profile_counts(1, 2, 3)
    assert pc.counts == {(1, 1): 1, (2, 4): 1, (3, 9): 1}


def test_profiles_linear_pairs():
    assert profile_counts(2, 1, 2).counts == {(2,): 1, (3,): 2, (4,): 1}


def test_profiles_quadratic_triples():
    assert profile_counts(3, 2, 2).counts == {(3, 3): 1, (4, 6): 3, (5, 9): 3, (6, 12): 1}


def test_profile_json_counts_are_strings():
    obj = json.loads(profile_counts(2, 1, 2).to_json())
    assert obj["profiles"][1] == {"profile": [3], "count": "2"}


@pytest.mark.parametrize("args,want", [((1, 1, 5), 5), ((2, 2, 3), 15), ((3, 2, 2), 20), ((2, 1, 2), 6)])
def test_count_J_values(args, want):
    assert count_J(*args) == want
    assert count_J(*args, method="reference") == want


@pytest.mark.parametrize("s,k,X", [(2, 2, 3), (2, 1, 4), (3, 2, 3), (2, 3, 4)])
def test_count_J_matches_tuple_enumeration(s, k, X):
    assert count_J(s, k, X) == _brute_J(s, k, X)


def test_two_variable_quadratic_formula():
    for X in range(1, 12):
        assert count_J(2, 2, X) == 2 * X * X - X


@pytest.mark.parametrize("s,k,X", [(2, 2, 5), (3, 2, 6), (2, 3, 7), (3, 3, 5)])
def test_translation_invariance(s, k, X):
    base = count_J(s, k, X)
    for shift in (1, 17, -5):
        assert count_J(s, k, X, shift) == base
        assert count_J(s, k, X, shift, method="reference") == base


def test_reflection_invariance():
    # x -> X + 1 - x maps [1, X] onto itself; over [-X, -1] the profile is negated in odd degrees
    for s, k, X in ((2, 2, 4), (2, 3, 4), (3, 2, 3)):
        assert count_J(s, k, X, shift=-(X + 1)) == count_J(s, k, X)
        assert _brute_J(s, k, X, lo=-X) == count_J(s, k, X)


@pytest.mark.parametrize("s,k,X", [(2, 2, 5), (3, 2, 4), (2, 3, 6), (4, 2, 3)])
def test_floors(s, k, X):
    pc = profile_counts(s, k, X)
    J = pc.J()
    assert J == count_J(s, k, X)
    assert J >= X**s
    assert J * len(pc.counts) >= X ** (2 * s)
    assert pc.total() == X**s


@settings(max_examples=40, deadline=None)
@given(s=st.integers(1, 3), k=st.integers(1, 3), X=st.integers(1, 7), shift=st.integers(-20, 20))
def test_fast_path_matches_reference(s, k, X, shift):
    assert count_J(s, k, X, shift, method="numpy") == count_J(s, k, X, shift, method="reference")


def test_budget_refusal():
    with pytest.raises(BudgetExceeded) as e:
        count_J(6, 4, 10_000)
    assert e.value.estimate > e.value.budget
    with pytest.raises(BudgetExceeded):
        count_J(2, 2, 5, budget=3)
    assert profile_estimate(2, 2, 5) <= 15


def test_bad_arguments():
    with pytest.raises(ValueError):
        count_J(0, 2, 5)
    with pytest.raises(ValueError):
        count_J(2, 2, 5, method="fast")


def test_congruential_trivial_moduli():
    for s, k, X in ((2, 2, 3), (1, 3, 4), (3, 1, 5)):
        assert count_J_congruential(s, k, X, [1] * k) == X ** (2 * s)


def test_congruential_relaxation_and_stabilisation():
    s, k, X = 2, 2, 3
    J = count_J(s, k, X)
    assert count_J_congruential(s, k, X, (2, 2)) >= J
    big = [s * (X**j - 1) + 1 for j in range(1, k + 1)]
    assert count_J_congruential(s, k, X, big) == J
    assert count_J_congruential(s, k, X, [q + 5 for q in big]) == J


def test_congruential_monotone_along_divisibility_chains():
    s, k, X = 2, 2, 4
    prev = None
    for e in range(0, 7):
        q = 2**e
        v = count_J_congruential(s, k, X, (q, 3 * q))
        if prev is not None:
            assert v <= prev
        prev = v
    assert prev == count_J(s, k, X)


def test_congruential_paths_agree():
    for moduli in ((3, 5), (4, 9), (7, 13)):
        assert count_J_congruential(3, 2, 3, moduli, method="numpy") == count_J_congruential(
            3, 2, 3, moduli, method="reference"
        )


def test_growth_slopes():
    assert 4.7 <= empirical_growth(4, 2, [10, 20, 40, 80]) <= 5.3
    assert abs(empirical_growth(1, 1, [10, 100, 1000]) - 1.0) <= 0.01
    assert 1.9 <= empirical_growth(2, 2, [10, 40, 160]) <= 2.1
    with pytest.raises(ValueError):
        empirical_growth(2, 2, [10, 20])


def test_growth_csv():
    text = growth_series_csv(1, 1, [10, 100])
    assert text.splitlines() == ["X,J,slope", "10,10,", "100,100,1.000000"]


@pytest.mark.parametrize("p", [5, 7])
def test_congruence_classes_small(p):
    got, bound, ok = congruence_class_extremum(p, 3, 2, 2)
    assert ok and got <= bound
    assert bound == congruence_class_bound(p, 3, 2)
    if p == 5:
        assert bound == 6


@pytest.mark.parametrize("p,k,h", [(5, 3, 2), (7, 3, 2), (3, 4, 2), (3, 4, 3)])
def test_congruence_single_variable(p, k, h):
    got, bound, ok = congruence_class_extremum(p, k, 1, h)
    assert ok
    assert got <= k


def test_congruence_rejections():
    with pytest.raises(ValueError):
        congruence_class_extremum(4, 3, 2, 2)
    with pytest.raises(ValueError):
        congruence_class_extremum(17, 3, 2, 2)
    with pytest.raises(ValueError):
        congruence_class_extremum(5, 3, 2, 3)
    with pytest.raises(ValueError):
        congruence_class_extremum(5, 5, 2, 2)
