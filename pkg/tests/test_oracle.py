from fractions import Fraction

import numpy as np
import pytest

from takagi_extrema import (
    EvalParams,
    InvalidParameter,
    global_extremum,
    grid_extremum,
    independent_consistent_prefix,
    t_v,
)
from takagi_extrema.oracle import PERIOD, _eval_nodes, periodic_table


@pytest.mark.parametrize("v", [0.3, -0.7, 0.9])
def test_periodic_table_exact(v):
    table = periodic_table(v)
    rng = np.random.default_rng(1)
    for s in rng.integers(0, PERIOD, 20):
        exact, err = t_v(Fraction(int(s), PERIOD), EvalParams(Fraction(v).limit_denominator(10)))
        assert abs(table[s] - float(exact)) < 1e-12 + float(err)


def test_eval_nodes_match_exact_sum():
    v = Fraction(-3, 5)
    table = periodic_table(float(v))
    a = 6
    Q = 2**a * PERIOD
    j = np.array([0, 1, 17, Q // 3, Q // 5, Q - 1, 123456 % Q])
    got = _eval_nodes(j, a, float(v), table)
    for jj, g in zip(j, got):
        exact, err = t_v(Fraction(int(jj), Q), EvalParams(v, abs_tol=1e-15))
        assert abs(g - float(exact)) < 1e-12 + float(err)


@pytest.mark.parametrize("v, kind", [(0.3, "max"), (-0.7, "min"), (-0.9, "max"), (0.5, "max"),
                                     (0.75, "max"), (-0.55, "max")])
def test_oracle_agrees_small_grid(v, kind):
    res = grid_extremum(v, kind, grid_size=2**14, refine_rounds=2)
    rep = global_extremum(Fraction(v).limit_denominator(100), kind)
    assert abs(res.value - float(rep.value)) < 1e-9
    value, points = res
    assert value == res.value and points == res.points


def test_oracle_points_near_reported():
    res = grid_extremum(0.3, "max", grid_size=2**16, refine_rounds=3)
    rep = global_extremum(Fraction(3, 10))
    for x in rep.points():
        assert min(abs(float(x - p)) for p in res.points) < 1e-9


def test_oracle_rejects():
    with pytest.raises(InvalidParameter):
        grid_extremum(1.0)
    with pytest.raises(InvalidParameter):
        grid_extremum(0.3, grid_size=16)


def test_independent_prefix_terminates_at_polynomial():
    # 1 - w = 0 at w = 1
    assert independent_consistent_prefix(1, 10) == [1, -1]
    # anti-consistent at -1 stops after 1 + x
    assert independent_consistent_prefix(-1, 10, anti=True) == [1, 1]
