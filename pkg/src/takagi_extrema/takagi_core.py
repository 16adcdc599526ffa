"""Evaluation of the triangle wave T_0 and the series T_v(x) = sum v**n T_0(2**n x).

Every function works in the arithmetic of its inputs:

* ints and Fractions give exact rational results;
* Python floats and numpy arrays use float64 (doubling and taking the
  fractional part are exact in binary floating point, so the only rounding is
  in the weighted sum);
* mpmath numbers, decimal strings and :class:`RealPoint` objects are evaluated
  with mpmath at ``prec`` bits (200 by default).
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .errors import InvalidParameter, TolNotReached
from .realpoint import DEFAULT_PRECISION, Rational, RealPoint

__all__ = [
    "EvalParams",
    "t0",
    "t_v",
    "s_vn",
    "functional_equation_residual",
    "truncation_index",
    "tail_bound",
    "sup_bound",
]


@dataclass(frozen=True)
class EvalParams:
    """Parameters for :func:`t_v`.

    Attributes:
        v: Ratio in (-1, 1).
        abs_tol: Target absolute error of the truncated sum.
        max_terms: Hard cap on the number of terms.
        prec: Working precision in bits for the mpmath backend.
    """

    v: object
    abs_tol: float = 1e-12
    max_terms: int = 10_000
    prec: int = DEFAULT_PRECISION

    def __post_init__(self):
        if not abs(_magnitude(self.v)) < 1:
            raise InvalidParameter(f"|v| must be < 1, got {self.v}")
        if not self.abs_tol > 0:
            raise InvalidParameter("abs_tol must be positive")
        if self.max_terms < 1:
            raise InvalidParameter("max_terms must be >= 1")


def _magnitude(v):
    if isinstance(v, RealPoint):
        return float(v)
    if isinstance(v, str):
        return float(Fraction(v)) if "/" in v else float(v)
    return float(v)


def _kind(*values):
    """Pick the backend for a tuple of inputs: 'exact', 'mp', 'float' or 'array'."""
    kinds = set()
    for x in values:
        if isinstance(x, np.ndarray):
            kinds.add("array")
        elif isinstance(x, (bool, int, Fraction, Rational)):
            kinds.add("exact")
        elif isinstance(x, (float, np.floating)):
            kinds.add("float")
        else:
            kinds.add("mp")
    if "array" in kinds:
        return "array"
    if "mp" in kinds:
        return "mp"
    if "float" in kinds:
        return "float"
    return "exact"


def _convert(x, kind):
    if kind == "exact":
        return x.value if isinstance(x, Rational) else Fraction(x)
    if kind == "mp":
        if isinstance(x, RealPoint):
            return x.to_mpf(mpmath.mp.prec)
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        if isinstance(x, str) and "/" in x:
            q = Fraction(x)
            return mpmath.mpf(q.numerator) / q.denominator
        return mpmath.mpf(x)
    if kind == "array":
        return np.asarray(x, dtype=float) if isinstance(x, np.ndarray) else float(x)
    return float(x)


def _floor(x, kind):
    if kind == "exact":
        return Fraction(math.floor(x))
    if kind == "mp":
        return mpmath.floor(x)
    if kind == "array":
        return np.floor(x)
    return float(math.floor(x))


def _frac(x, kind):
    return x - _floor(x, kind)


def _t0_frac(f, kind):
    """Distance to the nearest integer for f already in [0, 1)."""
    if kind == "array":
        return np.minimum(f, 1 - f)
    return min(f, 1 - f)


def t0(x, prec=DEFAULT_PRECISION):
    """Distance from ``x`` to the nearest integer.

    >>> t0(Fraction(2, 5))
    Fraction(2, 5)
    >>> t0(0.5)
    0.5
    """
    kind = _kind(x)
    with mpmath.workprec(prec):
        x = _convert(x, kind)
        return _t0_frac(_frac(x, kind), kind)


def tail_bound(v, K):
    """Bound |v|**(K+1) / (2(1-|v|)) on the terms of index > K."""
    a = abs(v)
    return a ** (K + 1) / (2 * (1 - a))


def sup_bound(v):
    """Bound 1/(2 - 2|v|) on |T_v|."""
    return 1 / (2 - 2 * abs(v))


def truncation_index(v, abs_tol, max_terms=None):
    """Smallest K with tail_bound(v, K) <= abs_tol (None when it exceeds max_terms)."""
    a = abs(float(v))
    if a == 0:
        return 0
    target = 2 * (1 - a) * float(abs_tol)
    if target >= 1:
        return 0
    K = max(0, math.ceil(math.log(target) / math.log(a)) - 1)
    # the float logarithms can be off by one either way
    while K > 0 and a**K <= target:
        K -= 1
    while a ** (K + 1) > target:
        K += 1
    if max_terms is not None and K >= max_terms:
        return None
    return K


def t_v(x, p, strict=True):
    """Truncated T_v(x) with a rigorous bound on the discarded tail.

    Args:
        x: Point (scalar of any supported type, or a numpy array).
        p: :class:`EvalParams`; ``p.v`` may be rational, float, mpf or a RealPoint.
        strict: Raise :class:`TolNotReached` if ``max_terms`` is too small.
            With ``strict=False`` the capped sum is returned with its
            achieved bound.

    Returns:
        ``(value, err_bound)``.
    """
    kind = _kind(x, p.v)
    with mpmath.workprec(p.prec):
        v = _convert(p.v, kind if kind != "array" else "float")
        x = _convert(x, kind)
        if v == 0:
            return _t0_frac(_frac(x, kind), kind), _zero(kind)
        K = truncation_index(v, p.abs_tol, p.max_terms)
        if K is None:
            K = p.max_terms - 1
            achieved = tail_bound(v, K)
            if strict:
                raise TolNotReached(achieved, p.abs_tol, p.max_terms)
        value = _partial_sum(x, v, K, kind)
        return value, tail_bound(v, K)


def _zero(kind):
    return {"exact": Fraction(0), "mp": mpmath.mpf(0)}.get(kind, 0.0)


def _partial_sum(x, v, N, kind):
    y = _frac(x, kind)
    total = _t0_frac(y, kind)
    w = 1
    for _ in range(N):
        w = w * v
        y = _frac(2 * y, kind)
        total = total + w * _t0_frac(y, kind)
    return total


def s_vn(x, v, N, prec=DEFAULT_PRECISION):
    """Finite sum S_{v,N}(x) = sum_{k=0}^{N} v**k T_0(2**k x)."""
    if N < 0:
        raise InvalidParameter("N must be >= 0")
    kind = _kind(x, v)
    with mpmath.workprec(prec):
        v = _convert(v, kind if kind != "array" else "float")
        return _partial_sum(_convert(x, kind), v, N, kind)


def functional_equation_residual(x, v, N, p=None):
    """|T_v(x) - S_{v,N-1}(x) - v**N T_v(2**N x)| from independent truncations.

    The exact identity makes this a self-test of the truncation: the result
    stays within three times the error bound of :func:`t_v`.
    """
    if N < 1:
        raise InvalidParameter("N must be >= 1")
    p = p or EvalParams(v)
    if p.v != v:
        p = EvalParams(v, p.abs_tol, p.max_terms, p.prec)
    kind = _kind(x, v)
    with mpmath.workprec(p.prec):
        xx = _convert(x, kind)
        vv = _convert(v, kind if kind != "array" else "float")
        full, _ = t_v(xx, p)
        shifted, _ = t_v(2**N * xx, p)
        head = _partial_sum(xx, vv, N - 1, kind)
        r = full - head - vv**N * shifted
        return np.abs(r) if kind == "array" else abs(r)
