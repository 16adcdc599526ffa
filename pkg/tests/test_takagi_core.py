from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import dyadic_fractions
from takagi_extrema import (
    EvalParams,
    InvalidParameter,
    TolNotReached,
    functional_equation_residual,
    s_vn,
    t0,
    t_v,
    truncation_index,
)
from takagi_extrema.takagi_core import sup_bound, tail_bound

vs = st.floats(-0.95, 0.95, allow_nan=False)


def test_t0_basic_values():
    assert t0(Fraction(2, 5)) == Fraction(2, 5)
    assert t0(Fraction(7, 5)) == Fraction(2, 5)
    assert t0(Fraction(-1, 3)) == Fraction(1, 3)
    assert t0(0.5) == 0.5
    assert t0(3) == 0


def test_t0_array():
    x = np.array([0.0, 0.25, 0.5, 0.75, 1.25])
    assert np.allclose(t0(x), [0, 0.25, 0.5, 0.25, 0.25])


def test_known_values():
    # 3/5 doubles through 3/5, 1/5, 2/5, 4/5, so T_{1/3}(3/5) = (70/135) / (80/81)
    val, err = t_v(Fraction(3, 5), EvalParams(Fraction(1, 3)))
    assert abs(val - Fraction(21, 40)) <= err
    # T_0(2^n / 3) = 1/3 for every n
    val, err = t_v(Fraction(1, 3), EvalParams(Fraction(3, 5)))
    assert abs(val - Fraction(5, 6)) <= err
    val, err = t_v(0.4, EvalParams(0.25))
    assert abs(val - 0.48) <= err + 1e-15
    val, err = t_v(Fraction(1, 4), EvalParams(Fraction(2, 5)))
    assert val == Fraction(9, 20) and err == 0 or abs(val - Fraction(9, 20)) <= err


def test_s_vn_values():
    assert s_vn(Fraction(1, 4), Fraction(-1, 2), 1) == 0
    assert s_vn(Fraction(1, 4), Fraction(1, 2), 1) == Fraction(1, 2)


@given(dyadic_fractions(), vs)
def test_symmetry(x, v):
    p = EvalParams(v)
    a, e1 = t_v(float(x), p)
    b, e2 = t_v(float(1 - x), p)
    assert abs(a - b) <= 2 * max(e1, e2) + 1e-14


@given(dyadic_fractions(), vs)
def test_periodicity(x, v):
    p = EvalParams(v)
    a, e = t_v(float(x), p)
    b, _ = t_v(float(x + 1), p)
    assert abs(a - b) <= 2 * e + 1e-14


@given(st.floats(-3, 3, allow_nan=False), vs)
def test_bound(x, v):
    val, err = t_v(x, EvalParams(v))
    assert abs(val) <= sup_bound(v) + err + 1e-14


def test_quarter_closed_form_grid():
    x = np.linspace(0, 1, 10_001)
    val, err = t_v(x, EvalParams(0.25))
    assert np.max(np.abs(val - 2 * (x - x * x))) <= 2 * err + 1e-14


@given(dyadic_fractions(20), vs, st.integers(1, 12))
def test_functional_equation(x, v, N):
    p = EvalParams(v)
    _, err = t_v(float(x), p)
    assert functional_equation_residual(float(x), v, N, p) <= 3 * err + 1e-14


def test_functional_equation_mp():
    v = mpmath.mpf(1) / 3
    p = EvalParams(v, abs_tol=1e-40)
    _, err = t_v(mpmath.mpf("0.3"), p)
    assert functional_equation_residual(mpmath.mpf("0.3"), v, 5, p) <= 3 * err


def test_exact_backend_is_exact_for_zero_tail():
    val, err = t_v(Fraction(1, 3), EvalParams(0))
    assert val == Fraction(1, 3) and err == 0


def test_truncation_index_is_minimal():
    for v in (0.1, 0.5, 0.9, -0.7):
        for tol in (1e-3, 1e-9, 1e-12):
            K = truncation_index(v, tol)
            assert tail_bound(v, K) <= tol
            if K > 0:
                assert tail_bound(v, K - 1) > tol


def test_tol_not_reached():
    with pytest.raises(TolNotReached) as info:
        t_v(0.3, EvalParams(0.99, abs_tol=1e-12, max_terms=10))
    assert info.value.achieved > 1e-12
    val, err = t_v(0.3, EvalParams(0.99, abs_tol=1e-12, max_terms=10), strict=False)
    assert err == pytest.approx(tail_bound(0.99, 9))


@pytest.mark.parametrize("v", [1, -1, 1.5])
def test_invalid_v(v):
    with pytest.raises(InvalidParameter):
        EvalParams(v)
