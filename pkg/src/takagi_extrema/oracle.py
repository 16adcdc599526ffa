"""Brute-force checks that share no code with the closed-form machinery.

:func:`grid_extremum` scans T_v on a grid of rationals j/Q with
Q = 2^a (2^12 - 1). Every such node has a binary expansion with preperiod a
and period 12, so T_v is summed *exactly* (no truncation): the periodic tail
is a table of T_v(s / 4095), and the first a terms use integer remainders.
The grid contains 1/3, 1/5 and their multiples, where several extrema sit,
and refinement rounds add 12 more preperiod digits around each cluster.

:func:`independent_consistent_prefix` rebuilds the consistent sign sequence
by Horner evaluation at every step, with mpmath roots and sympy remainders in
place of the interval and gcd machinery of the main construction.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
import sympy

from .errors import InvalidParameter, SignAmbiguous
from .realpoint import AlgebraicRoot, Rational, as_point

__all__ = ["OracleResult", "grid_extremum", "periodic_table", "independent_consistent_prefix"]

PERIOD_BITS = 12
PERIOD = 2**PERIOD_BITS - 1  # 4095 = 3^2 * 5 * 7 * 13


@dataclass
class OracleResult:
    """Best value found and one representative point per cluster.

    Iterating yields ``(value, points)``.
    """

    value: float
    points: list
    slack: float = 0.0
    final_cell: float = 0.0
    evaluations: int = 0
    history: list = field(default_factory=list)

    def __iter__(self):
        yield self.value
        yield self.points


def periodic_table(v):
    """T_v(s / 4095) for s = 0..4094, from one period of digits.

    For y with purely periodic expansion of period b,
    T_v(y) = sum_{n<b} v^n T_0(2^n y) / (1 - v^b).
    """
    s = np.arange(PERIOD, dtype=np.int64)
    r = s.copy()
    acc = np.zeros(PERIOD)
    w = 1.0
    for _ in range(PERIOD_BITS):
        acc += w * np.minimum(r, PERIOD - r) / PERIOD
        r = (2 * r) % PERIOD
        w *= v
    return acc / (1.0 - v**PERIOD_BITS)


def _eval_nodes(j, a, v, table):
    """Exact T_v(j / (2^a 4095)) for an int64 array j (up to float rounding)."""
    Q = np.uint64((1 << a) * PERIOD)
    r = j.astype(np.uint64) % Q
    out = np.zeros(j.shape)
    w = 1.0
    for _ in range(a):
        out += w * (np.minimum(r, Q - r).astype(np.float64) / float(Q))
        r = (r * np.uint64(2)) % Q
        w *= v
    # after a doublings the point is s / 4095 with s = j mod 4095
    return out + w * table[(j % PERIOD).astype(np.int64)]


def grid_extremum(v, kind="max", grid_size=2**18, refine_rounds=3, max_clusters=8,
                  window=16):
    """Extremize T_v on a uniform grid and refine each near-best cluster.

    Args:
        v: Parameter in (-1, 1) (converted to float).
        kind: ``"max"`` or ``"min"``.
        grid_size: Approximate number of coarse nodes (at least 2^10).
        refine_rounds: Each round multiplies the resolution by 2^12 inside
            windows of ``window`` coarse cells around every cluster.
        max_clusters: Clusters kept per round, best first.

    Returns:
        OracleResult with the best value and cluster representatives.
    """
    v = float(v)
    if not abs(v) < 1:
        raise InvalidParameter("oracle needs |v| < 1")
    if grid_size < 2**10:
        raise InvalidParameter("grid_size must be at least 2^10")
    sign = 1.0 if str(kind).lower().endswith("max") else -1.0
    table = periodic_table(v)
    a = max(1, round(math.log2(grid_size)) - PERIOD_BITS)
    Q = (1 << a) * PERIOD
    j = np.arange(Q + 1, dtype=np.int64)
    vals = sign * _eval_nodes(j, a, v, table)
    cell = 1.0 / Q
    slack = _slack(v, cell)
    evaluations = vals.size
    centers = _clusters(j, vals, slack, 4, max_clusters)
    best = float(vals.max())
    best_x = [Fraction(int(c), Q) for c in centers]
    history = [(a, best)]
    for _ in range(refine_rounds):
        a_new = a + PERIOD_BITS
        if a_new > 48:
            break
        scale = 1 << PERIOD_BITS
        Q_new = (1 << a_new) * PERIOD
        cand_j, cand_v = [], []
        for c in centers:
            lo = max(0, (int(c) - window) * scale)
            hi = min(Q_new, (int(c) + window) * scale)
            jj = np.arange(lo, hi + 1, dtype=np.int64)
            cand_j.append(jj)
            cand_v.append(sign * _eval_nodes(jj, a_new, v, table))
        jj = np.concatenate(cand_j)
        vv = np.concatenate(cand_v)
        order = np.argsort(jj, kind="stable")
        jj, vv = jj[order], vv[order]
        keep = np.concatenate(([True], np.diff(jj) > 0))
        jj, vv = jj[keep], vv[keep]
        evaluations += vv.size
        a, Q, cell = a_new, Q_new, 1.0 / Q_new
        slack = _slack(v, cell)
        best = max(best, float(vv.max()))
        centers = _clusters(jj, vv, slack, 4 * scale, max_clusters)
        best_x = [Fraction(int(c), Q) for c in centers]
        history.append((a, best))
    return OracleResult(sign * best, sorted(best_x), slack, cell, evaluations, history)


def _slack(v, cell):
    """Value band kept around the best node: one cell of variation."""
    if abs(v) < 0.5:
        return cell / (1.0 - 2.0 * abs(v)) + 1e-13
    return 1e-3


def _clusters(j, vals, slack, gap, max_clusters, radius=2):
    """Best near-maximal local maxima, pairwise more than ``gap`` indices apart.

    Picking separated local maxima (rather than one node per run of near-best
    nodes) keeps symmetric extrema apart even when the function stays within
    ``slack`` of the best value on the whole stretch between them.
    """
    best = vals.max()
    padded = np.pad(vals, radius, constant_values=-np.inf)
    local = sliding_window_view(padded, 2 * radius + 1).max(axis=1)
    cand = np.nonzero((vals >= local) & (vals >= best - slack))[0]
    order = cand[np.argsort(-vals[cand], kind="stable")]
    chosen = []
    for i in order:
        if all(abs(int(j[i]) - int(j[c])) > gap for c in chosen):
            chosen.append(i)
            if len(chosen) == max_clusters:
                break
    return [int(j[c]) for c in chosen]


# independent sign sequence


def independent_consistent_prefix(w, L, anti=False, prec=2048):
    """First ``L`` signs of the consistent function of w, recomputed from scratch.

    Each partial sum is evaluated by Horner from the start. Rationals are
    exact; algebraic points use a root of the defining polynomial from
    ``mpmath.polyroots`` at ``prec`` bits, with exact vanishing decided by a
    sympy polynomial remainder. The sequence ends early if a partial sum
    vanishes.

    Raises:
        SignAmbiguous: A partial sum is tiny but not exactly zero.
    """
    w = as_point(w)
    flip = 1 if anti else -1
    if isinstance(w, Rational):
        x = w.value

        def sign_of(coeffs):
            acc = Fraction(0)
            for c in reversed(coeffs):
                acc = acc * x + c
            return (acc > 0) - (acc < 0)

    elif isinstance(w, AlgebraicRoot):
        t = sympy.Symbol("t")
        minpoly = sympy.Poly(list(reversed(w.poly)), t)
        lo, hi = (float(e) for e in w.enclosure(60))
        with mpmath.workprec(prec):
            roots = mpmath.polyroots(list(reversed(w.poly)), maxsteps=500, extraprec=prec)
            real = [r.real if isinstance(r, mpmath.mpc) else r for r in roots
                    if abs(mpmath.im(r)) < mpmath.mpf(2) ** (-prec // 2)]
            cands = [r for r in real if lo - 1e-12 <= r <= hi + 1e-12]
        if len(cands) != 1:
            raise InvalidParameter("could not single out the root")
        xr = cands[0]

        def sign_of(coeffs):
            with mpmath.workprec(prec):
                acc = mpmath.mpf(0)
                for c in reversed(coeffs):
                    acc = acc * xr + c
                if abs(acc) > mpmath.mpf(2) ** (-(prec // 2)):
                    return 1 if acc > 0 else -1
            rem = sympy.Poly(list(reversed(coeffs)), t).rem(minpoly)
            if rem.is_zero:
                return 0
            raise SignAmbiguous(len(coeffs) - 1, precision=prec)

    else:
        raise InvalidParameter("independent prefix needs a rational or algebraic point")

    coeffs = [1]
    while len(coeffs) < L:
        s = sign_of(coeffs)
        if s == 0:
            break
        coeffs.append(flip * s)
    return coeffs
