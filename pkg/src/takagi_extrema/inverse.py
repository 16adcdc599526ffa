"""Recover v in (1/4, 1/2) from a known maximum point of T_v.

The digits of a maximum point x in [0, 1/2] give a unitary series
F(x) = 1/(1-x) - 2(x_1 + x_2 x + x_3 x^2 + ...). The point w = 2v must be a
root of F in (1/2, 1) with F'(w) < 0, and F must be intermediate for the
consistent function of w (equal to it when that function is a series). When
the digits are eventually periodic F is a rational function, so its roots are
roots of an integer polynomial and everything below is exact.
"""

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import _poly
from .consistency import consistent_function
from .dyadic import DyadicExpansion
from .errors import InvalidParameter
from .realpoint import AlgebraicRoot, Rational, RealPoint, root_in
from .unitary import RationalFunction, SignSeq, is_intermediate

__all__ = [
    "Status",
    "InverseOutcome",
    "series_from_point",
    "candidate_roots",
    "select_consistent_root",
    "inverse",
]

PROBES = 2048
DELTA = Fraction(1, 10**9)
DEFAULT_CHECK_LEN = 128


class Status(str, enum.Enum):
    FOUND = "Found"
    NO_ROOT = "NoRoot"
    ROOT_NOT_INTERMEDIATE = "RootNotIntermediate"

    def __str__(self):
        return self.value


@dataclass
class InverseOutcome:
    """Result of the inversion.

    Attributes:
        status: Found, NoRoot or RootNotIntermediate.
        v, w: The recovered parameter and w = 2v (Found only).
        F: Series built from the digits.
        roots: Candidate roots with negative derivative.
        approximate: True when the digits were a truncated prefix.
        digits_used: Number of digits behind F (None for exact input).
        complete: False if root counting found roots the probes missed.
    """

    status: Status
    v: Optional[RealPoint] = None
    w: Optional[RealPoint] = None
    F: Optional[SignSeq] = None
    roots: list = field(default_factory=list)
    approximate: bool = False
    digits_used: Optional[int] = None
    complete: bool = True

    @property
    def found(self):
        return self.status is Status.FOUND


def _as_expansion(x):
    if isinstance(x, DyadicExpansion):
        return x
    if isinstance(x, str):
        return DyadicExpansion.parse(x)
    return DyadicExpansion.from_fraction(Fraction(x))


def series_from_point(x_max):
    """Unitary series c_n = 1 - 2 x_{n+1} from the digits of a maximum point.

    Points above 1/2 are reflected first. Eventually periodic digits give a
    series with an exact rational closed form; truncated digits give a
    finite prefix without one.
    """
    x = _as_expansion(x_max)
    if x.exact:
        if x.to_fraction() > Fraction(1, 2):
            x = x.reflect()
        x = x.canonical()
    elif x.prefix and x.prefix[0] == 1:
        x = x.reflect()
    if not x.exact:
        return SignSeq([1 - 2 * b for b in x.prefix])
    a, b = len(x.prefix), len(x.period) or 1
    period = x.period or (0,)
    A = list(x.prefix) or [0]
    B = list(period)
    one_minus_xb = [1] + [0] * (b - 1) + [-1]
    # sum x_{n+1} x^n = A + x^a B / (1 - x^b)
    digit_num = _add(_mul(A, one_minus_xb), [0] * a + B)
    num = _add(one_minus_xb, [-2 * c for c in _mul([1, -1], digit_num)])
    den = _mul([1, -1], one_minus_xb)
    form = RationalFunction(num, den).reduced()
    n0 = a + b + 1
    head = [1 - 2 * x.digit(i + 1) for i in range(n0)]
    return SignSeq(head, closed_form=form)


def _mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _add(p, q):
    out = [0] * max(len(p), len(q))
    for i, a in enumerate(p):
        out[i] += a
    for i, b in enumerate(q):
        out[i] += b
    return out


def _numerator_and_denominator(F):
    if F.closed_form is not None:
        return _poly.normalize(F.closed_form.num), _poly.normalize(F.closed_form.den)
    return _poly.normalize(F.prefix(F.materialized)), (1,)


def _derivative(p):
    return tuple(j * p[j] for j in range(1, len(p))) or (0,)


def candidate_roots(F, probes=PROBES):
    """Roots of F in (1/2, 1) where F' < 0.

    The numerator is sampled at ``probes`` rational points of
    (1/2 + 1e-9, 1 - 1e-9); each sign change is refined exactly into an
    :class:`AlgebraicRoot`. Returns ``(roots, complete)`` where ``complete``
    says whether a Sturm count of the interval agrees with the roots found
    (roots of even multiplicity never change sign and are not found).
    """
    num, den = _numerator_and_denominator(F)
    lo, hi = Fraction(1, 2) + DELTA, 1 - DELTA
    step = (hi - lo) / probes
    xs = [lo + i * step for i in range(probes + 1)]
    signs = [_sign(_poly.eval_exact(num, x)) for x in xs]
    found = []
    for i in range(probes):
        s0, s1 = signs[i], signs[i + 1]
        if s0 == 0:
            found.append(Rational(xs[i]))
        elif s0 * s1 < 0:
            try:
                found.append(root_in(num, xs[i], xs[i + 1]))
            except InvalidParameter:
                found.append(AlgebraicRoot(num, xs[i], xs[i + 1], check=False))
    if signs[-1] == 0:
        found.append(Rational(xs[-1]))
    complete = _poly.count_roots(_poly.squarefree(num), lo, hi) == len(found)
    dnum = _derivative(num)
    keep = []
    for w in found:
        # at a root of num, F' = num' / den
        if w.sign_poly(dnum) * w.sign_poly(den) < 0:
            keep.append(w)
    return keep, complete


def _sign(q):
    return (q > 0) - (q < 0)


def select_consistent_root(roots, F, check_len=DEFAULT_CHECK_LEN):
    """Pick the root whose consistent function makes F intermediate; v = w/2."""
    n = F.available(check_len)
    for w in roots:
        res = consistent_function(w, max_len=max(n, 2))
        G = res.func
        if res.terminated:
            ok = is_intermediate(F, G, n)
        else:
            ok = G.prefix(n) == F.prefix(n)
        if ok:
            return InverseOutcome(Status.FOUND, v=w.scale(Fraction(1, 2)), w=w, F=F,
                                  roots=list(roots))
    if not roots:
        return InverseOutcome(Status.NO_ROOT, F=F)
    return InverseOutcome(Status.ROOT_NOT_INTERMEDIATE, F=F, roots=list(roots))


def inverse(x_max, check_len=DEFAULT_CHECK_LEN):
    """Full inversion: digits -> series -> roots -> consistent root -> v."""
    x = _as_expansion(x_max)
    F = series_from_point(x)
    roots, complete = candidate_roots(F)
    if not x.exact:
        # the late digits of a truncated point do not pin down the late signs
        check_len = min(check_len, max(2, len(x.prefix) // 2))
    out = select_consistent_root(roots, F, check_len)
    out.complete = complete
    if not x.exact:
        out.approximate = True
        out.digits_used = len(x.prefix)
    return out
