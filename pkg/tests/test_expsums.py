from __future__ import annotations

import cmath
import math
from decimal import Decimal, localcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvtbounds.expsums import (
    PhasePoint,
    convergents,
    eval_f,
    grid_mean_moment,
    grid_mean_moment_float,
    is_minor_arc,
    weyl_envelope_report,
)
from mvtbounds.oracle import count_J


def _golden() -> Decimal:
    with localcontext() as ctx:
        ctx.prec = 60
        return (Decimal(5).sqrt() - 1) / 2


def _naive(coeffs, X):
    return sum(cmath.exp(2j * math.pi * sum(float(c) * x ** (i + 1) for i, c in enumerate(coeffs))) for x in range(1, X + 1))


# --- evaluation


def test_zero_coefficients():
    assert eval_f(PhasePoint([0, 0, 0], 7)) == complex(7, 0)
    assert eval_f(PhasePoint([], 7)) == complex(7, 0)


def test_quadratic_half():
    assert abs(eval_f(PhasePoint.monomial(Fraction(1, 2), 2, 4))) < 1e-12


def test_integer_coefficients():
    for X in (1, 5, 31):
        assert eval_f(PhasePoint([3, -2, 7], X)) == complex(X, 0)


def test_matches_naive_sum():
    for coeffs, X in (([Fraction(1, 3), Fraction(2, 7)], 50), ([Fraction(5, 11), 0, Fraction(1, 13)], 40)):
        assert abs(eval_f(PhasePoint(coeffs, X)) - _naive(coeffs, X)) < 1e-9


def test_missing_penultimate_coefficient():
    p = PhasePoint.without_penultimate([Fraction(1, 5), Fraction(2, 9), Fraction(3, 7)], 20)
    assert p.coefficients[1] == 0
    assert eval_f(p) == eval_f(PhasePoint([Fraction(1, 5), 0, Fraction(3, 7)], 20))


def test_decimal_coefficients_are_accepted():
    z = eval_f(PhasePoint([Decimal("0.125")], 8))
    assert abs(z) < 1e-12


def test_rejects_empty_range():
    with pytest.raises(ValueError):
        PhasePoint([0], 0)


fractions_mod1 = st.fractions(min_value=-3, max_value=3, max_denominator=60)


@settings(max_examples=60, deadline=None)
@given(coeffs=st.lists(fractions_mod1, min_size=1, max_size=4), X=st.integers(1, 60), shift=st.integers(-3, 3))
def test_evaluation_properties(coeffs, X, shift):
    z = eval_f(PhasePoint(coeffs, X))
    assert abs(z) <= X
    moved = eval_f(PhasePoint([c + shift for c in coeffs], X))
    assert abs(moved - z) < 1e-9
    conj = eval_f(PhasePoint([-c for c in coeffs], X))
    assert abs(conj - z.conjugate()) < 1e-9


# --- minor arcs


def test_convergents_of_rational():
    assert list(convergents(Fraction(355, 113))) == [(3, 1), (22, 7), (355, 113)]


def test_half_is_major():
    d = is_minor_arc(Fraction(1, 2), 3, 100)
    assert not d.minor
    assert d.witness == (1, 2)


def test_zero_is_major():
    for k, X in ((3, 10), (5, 100)):
        d = is_minor_arc(0, k, X)
        assert not d and d.witness == (0, 1)


def test_golden_ratio_is_minor():
    d = is_minor_arc(_golden(), 3, 100)
    assert d.minor and d.witness is None


def test_general_theta():
    # X^theta = 10 allows q <= 10; 1/7 sits exactly on a rational
    assert not is_minor_arc(Fraction(1, 7), 3, 100, theta=Fraction(1, 2), scaled=False)
    assert is_minor_arc(Fraction(1, 17), 3, 100, theta=Fraction(1, 2), scaled=False)


def test_minor_arc_precondition():
    with pytest.raises(ValueError):
        is_minor_arc(Fraction(1, 3), 4, 7)


@settings(max_examples=80, deadline=None)
@given(alpha=st.fractions(min_value=0, max_value=1, max_denominator=10**6), k=st.integers(2, 4), X=st.integers(8, 400))
def test_minor_arc_symmetries(alpha, k, X):
    base = is_minor_arc(alpha, k, X).minor
    assert is_minor_arc(alpha + 1, k, X).minor == base
    assert is_minor_arc(1 - alpha, k, X).minor == base


@settings(max_examples=60, deadline=None)
@given(alpha=st.fractions(min_value=0, max_value=1, max_denominator=5000), k=st.integers(2, 3), X=st.integers(6, 60))
def test_convergent_scan_matches_exhaustive(alpha, k, X):
    # every q <= X/(2k) with its nearest a
    major = any(
        abs(q * alpha - round(q * alpha)) * 2 * k * Fraction(X) ** (k - 1) <= 1
        for q in range(1, X // (2 * k) + 1)
    )
    assert is_minor_arc(alpha, k, X).minor == (not major)


# --- orthogonality on grids


@pytest.mark.parametrize(
    "args,want", [((2, 2, 3, (13, 37)), 15), ((1, 1, 5, (11,)), 5), ((3, 2, 2, (7, 13)), 20)]
)
def test_grid_mean_moment(args, want):
    assert grid_mean_moment(*args) == want
    assert grid_mean_moment(*args) == count_J(*args[:3])


@pytest.mark.parametrize("args", [(2, 2, 3, (13, 37)), (1, 1, 5, (11,)), (3, 2, 2, (7, 13)), (2, 1, 6, (11,))])
def test_grid_float_agrees(args):
    exact = grid_mean_moment(*args)
    assert abs(grid_mean_moment_float(*args) - exact) <= 1e-6 * exact


def test_grid_precondition():
    with pytest.raises(ValueError):
        grid_mean_moment(2, 2, 3, (4, 37))
    with pytest.raises(ValueError):
        grid_mean_moment(2, 2, 3, (13,))


# --- envelope report


def test_envelope_trivial_modulus():
    r = weyl_envelope_report(4, 1, 0, 2, 50)
    assert r.envelope >= r.X
    assert r.ratio <= 1


def test_envelope_recorded_case():
    r = weyl_envelope_report(4, 17, 3, 4, 100)
    assert math.isfinite(r.ratio) and r.ratio > 0
    assert r.actual <= 100
    assert r.sigma_inverse == 14
    assert set(r.to_json_obj()) >= {"envelope", "actual", "ratio"}


def test_envelope_rejections():
    with pytest.raises(ValueError):
        weyl_envelope_report(4, 6, 3, 4, 100)
    with pytest.raises(ValueError):
        weyl_envelope_report(4, 5, 1, 1, 100)
    with pytest.raises(ValueError):
        weyl_envelope_report(4, 10**9, 1, 2, 100)
