from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings

from conftest import rationals
from takagi_extrema import (
    BlockCantor,
    Branch,
    DyadicExpansion,
    EvalParams,
    FourPoints,
    InvalidParameter,
    OnePoint,
    SignAmbiguous,
    SignSeq,
    TwoPoints,
    assemble_blockcantor,
    band_from_polynomial,
    from_expression,
    global_extremum,
    locate_un,
    locate_wk,
    neg_band_value,
    nth_root,
    t_v,
)

HALF = Fraction(1, 2)


def _mpf(x, prec=200):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _value_at(x, v, prec=200):
    """T_v(x) with its truncation bound, at high precision."""
    with mpmath.workprec(prec):
        vv = v.value if hasattr(v, "value") and isinstance(v.value, Fraction) else v.to_mpf(prec)
        xx = x if isinstance(vv, Fraction) else _mpf(x)
        return t_v(xx, EvalParams(vv, abs_tol=1e-30, prec=prec))


# golden values


@pytest.mark.parametrize("v", [Fraction(3, 5), Fraction(3, 4), Fraction(9, 10)])
def test_max_above_half(v):
    r = global_extremum(v)
    assert r.value == 1 / (3 * (1 - v))
    assert r.points() == [Fraction(1, 3), Fraction(2, 3)]
    assert r.branch is Branch.MAX_AT_THIRDS and r.exact


def test_max_at_half():
    r = global_extremum(HALF)
    assert r.value == Fraction(2, 3)
    assert isinstance(r.set, BlockCantor)
    assert (r.set.block, r.set.complement) == ("01", "10")
    assert r.set.inf == Fraction(1, 3) and r.set.sup == Fraction(2, 3)
    assert r.set.sup_left_half == Fraction(5, 12)
    assert r.set.dim == HALF


@pytest.mark.parametrize("v", [-HALF, 0, Fraction(1, 4), Fraction(-1, 3)])
def test_max_is_one_half(v):
    r = global_extremum(v)
    assert r.value == HALF and r.points() == [HALF] and isinstance(r.set, OnePoint)


@pytest.mark.parametrize("v", [Fraction(-2, 5), Fraction(3, 10), Fraction(9, 10)])
def test_min_at_ends(v):
    r = global_extremum(v, "min")
    assert r.value == 0 and r.points() == [0, 1]


def test_min_at_minus_half():
    r = global_extremum(-HALF, "min")
    assert r.value == 0
    assert r.set.block == "00" and r.set.dim == HALF


@pytest.mark.parametrize("v", [Fraction(-3, 5), Fraction(-9, 10), Fraction(-7, 10)])
def test_min_at_fifths(v):
    r = global_extremum(v, "min")
    assert r.value == (1 + 2 * v) / (5 * (1 - v * v))
    assert r.points() == [Fraction(1, 5), Fraction(4, 5)]


def test_min_minus_seven_tenths():
    assert global_extremum("-7/10", "min").value == Fraction(-8, 51)


def test_max_minus_nine_tenths():
    r = global_extremum("-9/10")
    assert r.value == Fraction(22, 19) and r.points() == [Fraction(2, 5), Fraction(3, 5)]


def test_max_inverse_two_sqrt_two():
    v = nth_root(Fraction(1, 8), 2)
    r = global_extremum(v)
    assert r.points() == [Fraction(5, 12), Fraction(7, 12)]
    with mpmath.workprec(200):
        expected = (26 + 3 * mpmath.sqrt(2)) / 56
        assert abs(r.value - expected) <= r.value_err + mpmath.mpf(10) ** -40


def test_max_quartic_root():
    r = global_extremum(from_expression("1/(2*root(2,4))"))
    assert r.points() == [Fraction(33, 80), Fraction(47, 80)]


def test_max_at_v1_four_points():
    v1 = from_expression("-(1+sqrt(5))/4")
    r = global_extremum(v1)
    assert isinstance(r.set, FourPoints)
    assert r.points() == [Fraction(2, 5), Fraction(19, 40), Fraction(21, 40), Fraction(3, 5)]
    with mpmath.workprec(200):
        expected = (15 + mpmath.sqrt(5)) / 25
        assert abs(r.value - expected) < mpmath.mpf(10) ** -40


@pytest.mark.parametrize("v, point", [(Fraction(1, 3), 0.419240), ("1/(2*sqrt(3))", 0.455393)])
def test_paper_approximate_points(v, point):
    r = global_extremum(from_expression(v) if isinstance(v, str) else v)
    assert abs(float(r.set.inf) - point) < 1e-5


def test_un_halves_block_cantor():
    for n, inf in ((2, Fraction(3, 7)), (3, Fraction(7, 15))):
        r = global_extremum(locate_un(n).scale(HALF))
        assert isinstance(r.set, BlockCantor) and r.set.inf == inf
        assert r.N == n and r.set.dim == Fraction(1, n + 1)


# invariants


SAMPLE_V = ["-19/20", "-9/10", "-3/4", "-13/20", "-11/20", "-1/2", "0", "1/4", "3/10", "1/3",
            "2/5", "9/20", "49/100", "1/2", "3/5", "19/20", "-(1+sqrt(5))/4",
            "(sqrt(5)-1)/4", "1/(2*sqrt(3))", "1/(2*sqrt(2))", "1/(2*root(2,4))"]


@pytest.fixture(scope="module")
def reports():
    out = []
    for v in SAMPLE_V:
        p = from_expression(v)
        for kind in ("max", "min"):
            out.append((p, global_extremum(p, kind)))
    return out


def test_sets_are_symmetric(reports):
    for v, r in reports:
        s = r.set
        assert s.inf + s.sup == 1, (v, r.kind)
        pts = r.points()
        if pts is not None:
            assert sorted(pts) == sorted(1 - p for p in pts)


def test_value_at_reported_points(reports):
    for v, r in reports:
        pts = r.points()
        if pts is None:
            pts = [r.set.inf, r.set.sup, r.set.sample([True, False])]
        perr = float(getattr(r.set, "err", 0))
        for x in pts:
            val, err = _value_at(x, v)
            # T_v is Lipschitz with constant 1/(1-2|v|) for |v| < 1/2
            lip = 1 / (1 - 2 * abs(float(v))) if abs(float(v)) < 0.5 else 0
            slack = 1e-12 + float(r.value_err) + float(err) + lip * perr
            assert abs(float(_mpf(val) - _mpf(r.value))) <= slack, (v, r.kind, x)


def test_max_points_in_middle_third(reports):
    for v, r in reports:
        if r.kind.name == "MAX":
            assert Fraction(1, 3) <= r.set.inf <= r.set.sup <= Fraction(2, 3)


def _is_dyadic(x):
    return x.denominator & (x.denominator - 1) == 0


@given(rationals(Fraction(1, 4), HALF, max_den=400))
@settings(max_examples=60)
def test_max_points_not_dyadic(v):
    if v in (Fraction(1, 4), HALF):
        return
    r = global_extremum(v)
    if isinstance(r.set, BlockCantor):
        return
    if r.set.exact:
        assert not any(_is_dyadic(p) for p in r.points())
    else:
        # digits known to 2^-L: no run of 16 equal trailing digits
        digits = r.set.digits.prefix
        assert len(set(digits[-16:])) == 2


def _left_interval(r):
    s = r.set
    if isinstance(s, OnePoint):
        return s.x, s.x
    if isinstance(s, BlockCantor):
        return s.inf, s.sup_left_half
    return s.x_minus - s.err, s.x_minus + s.err


def test_left_sets_move_left():
    # near 1/2 neighbouring sets share long digit prefixes, hence the small tol
    vs = sorted({Fraction(1, 4) + Fraction(k, 204) for k in range(0, 51)})
    reps = [_left_interval(global_extremum(v, tol=1e-70, prec=300)) for v in vs]
    for (lo_u, _), (_, hi_v) in zip(reps, reps[1:]):
        assert lo_u > hi_v


def test_block_cantor_value_identity():
    # M_v (1 - v^(N+1)) = M_{v,N}, exactly at v = 1/2
    P = SignSeq.polynomial([1, -1])
    _, _, M_N = band_from_polynomial(P, HALF)
    cantor, M = assemble_blockcantor(P, HALF)
    assert M * (1 - HALF**2) == M_N
    assert (cantor.a_N, cantor.b_N) == (Fraction(1, 4), HALF)
    # and to working precision at v = u_3 / 2
    v = locate_un(3).scale(HALF)
    r = global_extremum(v)
    _, _, M_N = band_from_polynomial(r.func, v)
    with mpmath.workprec(200):
        vv = v.to_mpf()
        assert abs(r.value * (1 - vv**4) - M_N) < mpmath.mpf(10) ** -50


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_shifted_value_matches_band_formula(k):
    vk = locate_wk(k).scale(HALF)
    r = global_extremum(vk)
    assert r.branch is Branch.SHIFTED
    assert len(r.points()) == 4
    for band in (k, k + 1):
        assert abs(r.value - neg_band_value(vk, band)) < 1e-12


def test_band_formula_at_interior_point():
    v = Fraction(-3, 4)
    r = global_extremum(v)
    assert r.band == 2
    assert r.points() == [HALF - Fraction(1, 5 * 2**3), HALF + Fraction(1, 5 * 2**3)]


def test_series_truncated_branch():
    r = global_extremum(nth_root(Fraction(1, 12), 2))
    assert r.branch is Branch.SERIES_TRUNCATED and r.prefix_len is not None
    r2 = global_extremum(Fraction(1, 3))
    assert r2.branch is Branch.SERIES


def test_tolerance_controls_error():
    for tol in (1e-6, 1e-12, 1e-20):
        r = global_extremum(Fraction(1, 3), tol=tol, prec=256)
        assert r.value_err <= tol
        assert r.set.err <= tol


@pytest.mark.parametrize("v", [1, -1, Fraction(3, 2)])
def test_invalid_v(v):
    with pytest.raises(InvalidParameter):
        global_extremum(v)


def test_float_at_branch_point_ambiguity():
    # 60-bit float near u_2 / 2: the construction cannot tell
    with pytest.raises(SignAmbiguous):
        from takagi_extrema import as_point

        global_extremum(as_point("0.30901699437494742", 60))


def test_truncated_points_digits():
    r = global_extremum(Fraction(1, 3), tol=1e-12)
    assert isinstance(r.set, TwoPoints) and not r.set.exact
    d = r.set.digits
    assert isinstance(d, DyadicExpansion) and not d.exact
    assert d.known_digits >= 40
