import itertools
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from takagi_extrema import (
    AltGeom,
    Geom,
    InvalidParameter,
    Lex,
    NegKFamily,
    PairAlt,
    SignSeq,
    SqrtLift,
    TwoToOne,
    attached_series,
    is_intermediate,
    lex_compare,
)
from takagi_extrema.unitary import evaluate, parse_poly, poly_to_str

unitary_polys = st.lists(st.sampled_from([-1, 1]), min_size=0, max_size=10).map(
    lambda tail: SignSeq.polynomial([1] + tail))
inside = rationals(Fraction(-9, 10), Fraction(9, 10), max_den=200)


def head(form, n):
    return list(itertools.islice(form.coefficients(), n))


@pytest.mark.parametrize("form, expected", [
    (Geom(), [1] * 8),
    (AltGeom(), [1, -1] * 4),
    (PairAlt(), [1, 1, -1, -1] * 2),
    (TwoToOne(), [1] + [-1] * 7),
    (NegKFamily(1), [1, -1, -1, 1, 1, -1, -1, 1, 1]),
    (NegKFamily(2), [1, -1, -1, -1, -1, 1, 1, -1, -1, 1]),
    (SqrtLift(TwoToOne(), 1), [1, -1, -1, 1, -1, 1, -1, 1]),
])
def test_closed_form_coefficients(form, expected):
    assert head(form, len(expected)) == expected


def test_sqrt_lift_flattens():
    a = SqrtLift(SqrtLift(AltGeom(), 1), 2)
    assert a.n == 3 and isinstance(a.inner, AltGeom)
    assert a == SqrtLift(AltGeom(), 3)


def test_closed_form_values():
    assert AltGeom()(Fraction(1, 2)) == Fraction(2, 3)
    assert TwoToOne()(Fraction(1, 2)) == 0
    assert Geom()(Fraction(1, 3)) == Fraction(3, 2)


@given(st.integers(1, 40))
def test_negk_pattern(k):
    c = head(NegKFamily(k), 2 * k + 9)
    assert c[0] == 1 and all(x == -1 for x in c[1:2 * k + 1])
    tail = c[2 * k + 1:]
    assert tail == [1, 1, -1, -1, 1, 1, -1, -1]


@given(unitary_polys, inside)
def test_attached_plus_sum(P, x):
    N = P.degree
    F = attached_series(P, "plus")
    val, err = F.eval(x)
    assert val == P.eval(x)[0] / (1 - x ** (N + 1))
    # the generated coefficients, summed without the closed form, agree
    prefix_only = SignSeq(F.prefix(400))
    approx, e2 = evaluate(prefix_only, x, abs_tol=1e-15)
    assert abs(approx - val) <= e2


@given(unitary_polys, inside)
def test_attached_minus_sum(P, x):
    N = P.degree
    F = attached_series(P, "minus")
    val, _ = F.eval(x)
    assert val == P.eval(x)[0] * (1 - 2 * x ** (N + 1)) / (1 - x ** (N + 1))
    coeffs = F.prefix(3 * (N + 1))
    block = list(P.poly())
    assert list(coeffs) == block + [-c for c in block] * 2


@given(unitary_polys)
def test_attached_bracket_polynomial(P):
    lo, hi = attached_series(P, "minus"), attached_series(P, "plus")
    assert lex_compare(lo, P) == Lex.LESS
    assert lex_compare(P, hi) == Lex.LESS
    assert lex_compare(lo, hi) == Lex.LESS


@given(unitary_polys, st.lists(st.booleans(), min_size=1, max_size=6))
def test_intermediate_between_attached(P, choices):
    block = list(P.poly())
    coeffs = list(block)
    for neg in choices:
        coeffs += [-c for c in block] if neg else block
    F = SignSeq(coeffs)
    assert is_intermediate(F, P)
    assert lex_compare(attached_series(P, "minus"), F, len(coeffs)) != Lex.GREATER
    assert lex_compare(F, attached_series(P, "plus"), len(coeffs)) != Lex.GREATER


def test_not_intermediate():
    P = SignSeq.polynomial([1, -1])
    assert not is_intermediate(SignSeq([1, -1, 1, 1]), P)


@given(st.lists(st.sampled_from([-1, 1]), min_size=20, max_size=60), st.integers(5, 19),
       inside)
def test_prefix_agreement_bounds_value_difference(tail, n, x):
    a = SignSeq.polynomial([1] + tail)
    flipped = [1] + tail[: n - 1] + [-c for c in tail[n - 1:]]
    b = SignSeq.polynomial(flipped)
    d = abs(a.eval(x)[0] - b.eval(x)[0])
    mag = abs(x)
    assert d <= 2 * mag**n / (1 - mag) + Fraction(1, 10**30)


def test_lex_polynomial_vs_series():
    P = SignSeq.polynomial([1, -1])
    assert lex_compare(P, SignSeq.from_closed_form(AltGeom(), 4)) == Lex.LESS
    r = lex_compare(P, SignSeq.polynomial([1, -1]))
    assert r == Lex.EQUAL_UP_TO and r.index == 2


def test_evaluate_truncation_error():
    F = SignSeq.from_rule(lambda n: 1 if n % 3 == 0 else -1, 4)
    with mpmath.workprec(200):
        x = mpmath.mpf(3) / 5
        val, err = F.eval(x, abs_tol=1e-20)
        # exact value: (1 - x - x^2) / (1 - x^3)
        exact = (1 - x - x**2) / (1 - x**3)
    assert abs(val - exact) <= err


def test_signs_and_parse_round_trip():
    P = SignSeq.polynomial([1, -1, -1, 1])
    assert P.signs() == "+--+"
    assert SignSeq.parse("+--+").poly() == P.poly()
    assert SignSeq.parse("1 - x - x^2 + x^3").poly() == P.poly()
    assert list(parse_poly(poly_to_str([1, -1, 0, 2]))) == [1, -1, 0, 2]
    assert SignSeq.parse("+--+...").is_polynomial is False


def test_invalid_sequences():
    with pytest.raises(InvalidParameter):
        SignSeq([-1, 1])
    with pytest.raises(InvalidParameter):
        SignSeq([1, 0])
    with pytest.raises(InvalidParameter):
        attached_series(SignSeq.from_closed_form(Geom(), 3), "plus")


def test_polynomial_coeff_beyond_degree_is_zero():
    P = SignSeq.polynomial([1, -1])
    assert P.coeff(5) == 0
