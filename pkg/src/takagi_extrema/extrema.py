"""Global maximum and minimum of T_v on [0, 1].

The extremum of T_v is read off the consistent (maximum) or anti-consistent
(minimum) function F of the point w = 2v:

* if F is a series, the extremum is attained at exactly two points
  x- = 1/2 - F(1/2)/4 and x+ = 1 - x-, whose binary digits are
  x_n = (1 - c_{n-1})/2;
* if F is a polynomial of degree N and v^(N+1) > 0, the extremum set is the
  block Cantor set of points whose digits are free concatenations of the
  block (x_1..x_{N+1}) and its complement;
* if v^(N+1) < 0 the set is an affine image of the opposite extremum set.

Large ranges of v have closed forms; :func:`global_extremum` dispatches on
them and falls back to the construction for v in (1/4, 1/2).

Values are exact Fractions when v is rational and the branch has a rational
closed form. Otherwise they are mpmath numbers at the working precision and
``value_err`` bounds truncation and rounding.
"""

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from .consistency import Mode, consistent_function, neg_band
from .dyadic import DyadicExpansion
from .errors import InvalidParameter
from .realpoint import DEFAULT_PRECISION, Rational, RealPoint, as_point
from .takagi_core import truncation_index
from .unitary import NegKFamily, PairAlt, SignSeq, attached_series

__all__ = [
    "Kind",
    "Branch",
    "TwoPoints",
    "OnePoint",
    "FourPoints",
    "BlockCantor",
    "ShiftedMinSet",
    "ExtremumReport",
    "extremum_points_from_series",
    "value_from_series",
    "band_from_polynomial",
    "assemble_blockcantor",
    "assemble_shifted",
    "neg_band_value",
    "global_extremum",
    "prefix_length",
]

HALF = Fraction(1, 2)


class Kind(enum.Enum):
    MAX = "max"
    MIN = "min"

    @classmethod
    def coerce(cls, kind):
        if isinstance(kind, cls):
            return kind
        return cls(str(kind).lower())

    @property
    def opposite(self):
        return Kind.MIN if self is Kind.MAX else Kind.MAX


class Branch(str, enum.Enum):
    """Which case of the analysis produced a report."""

    MIN_AT_ENDS = "MinAtEnds"  # v in (-1/2, 1)
    MIN_AT_FIFTHS = "MinAtFifths"  # v in (-1, -1/2)
    MAX_AT_THIRDS = "MaxAtThirds"  # v in (1/2, 1)
    MAX_AT_HALF = "MaxAtHalf"  # v in [-1/2, 1/4]
    MAX_NEG_BAND = "MaxNegativeBand"  # v in (-1, -1/2), v != v_k
    SHIFTED = "ShiftedOpposite"  # polynomial with v^(N+1) < 0
    BLOCK_CANTOR = "BlockCantor"  # polynomial with v^(N+1) > 0
    SERIES = "Series"  # v in (1/4, 1/2), provably a series
    SERIES_TRUNCATED = "SeriesTruncated"  # no polynomial found within the prefix

    def __str__(self):
        return self.value


# extremum sets


@dataclass(frozen=True)
class TwoPoints:
    """{x_minus, 1 - x_minus}.

    ``x_minus`` is a Fraction. When only a digit prefix is known it is the
    midpoint of the possible range and ``err`` is the half width.
    """

    x_minus: Fraction
    err: Fraction = Fraction(0)
    digits: Optional[DyadicExpansion] = None
    set_kind = "TwoPoints"

    @property
    def x_plus(self):
        return 1 - self.x_minus

    def points(self):
        return [self.x_minus, self.x_plus]

    @property
    def inf(self):
        return min(self.x_minus, self.x_plus)

    @property
    def sup(self):
        return max(self.x_minus, self.x_plus)

    @property
    def exact(self):
        return self.err == 0

    dim = 0


@dataclass(frozen=True)
class OnePoint:
    x: Fraction = HALF
    set_kind = "OnePoint"
    err = Fraction(0)
    exact = True
    dim = 0

    def points(self):
        return [self.x]

    @property
    def inf(self):
        return self.x

    sup = inf


@dataclass(frozen=True)
class FourPoints:
    pts: tuple
    err: Fraction = Fraction(0)
    set_kind = "FourPoints"
    dim = 0

    def points(self):
        return list(self.pts)

    @property
    def inf(self):
        return min(self.pts)

    @property
    def sup(self):
        return max(self.pts)

    @property
    def exact(self):
        return self.err == 0


@dataclass(frozen=True)
class BlockCantor:
    """Points 0.B1 B2 B3 ... with every B_i equal to ``block`` or ``complement``.

    Attributes:
        block: Digits of the left block (leading digit 0).
        complement: Bitwise complement of ``block``.
        hausdorff_dim: 1/(N+1), reported from the block length.
        inf, sup: Extreme points (0.(block) and 0.(complement)).
        sup_left_half: Largest point in [0, 1/2], 0.block(complement).
        a_N, b_N: Plateau of the partial sum S_{v,N} on the left.
    """

    block: str
    complement: str
    hausdorff_dim: Fraction
    inf: Fraction
    sup: Fraction
    sup_left_half: Fraction
    a_N: Fraction
    b_N: Fraction
    set_kind = "BlockCantor"
    err = Fraction(0)
    exact = True

    @property
    def dim(self):
        return self.hausdorff_dim

    def points(self):
        return None

    def contains_prefix(self, digits):
        """True if the digit string can start a point of the set."""
        m = len(self.block)
        for i in range(0, len(digits), m):
            chunk = digits[i:i + m]
            if chunk != self.block[: len(chunk)] and chunk != self.complement[: len(chunk)]:
                return False
        return True

    def sample(self, choices):
        """Exact point for a periodic choice pattern of blocks (True = complement)."""
        bits = "".join(self.complement if c else self.block for c in choices)
        return DyadicExpansion.parse(f"0.({bits})").to_fraction()


@dataclass(frozen=True)
class ShiftedMinSet:
    """{1/2 +- (shift - y / 2^(N+1)) : y in reference}.

    Used when the reference (opposite) set is infinite and so is stored as a
    transformation instead of an enumeration.
    """

    a_N: Fraction
    b_N: Fraction
    N: int
    shift: Fraction
    reference: object
    set_kind = "ShiftedMinSet"
    err = Fraction(0)
    exact = True
    dim = property(lambda self: self.reference.dim)

    def image(self, y):
        d = self.shift - Fraction(y) / 2 ** (self.N + 1)
        return HALF - d, HALF + d

    def points(self):
        ref = self.reference.points()
        if ref is None:
            return None
        return sorted({p for y in ref for p in self.image(y)})

    @property
    def inf(self):
        return min(self.image(self.reference.sup)[0], self.image(self.reference.inf)[0])

    @property
    def sup(self):
        return 1 - self.inf


@dataclass
class ExtremumReport:
    """Result of :func:`global_extremum`.

    Attributes:
        v: The parameter as a RealPoint.
        kind: Max or min.
        value: Extremal value (Fraction when exact, else mpmath number).
        value_err: Bound on ``|value - true value|``.
        set: One of the extremum-set classes above.
        branch: :class:`Branch` tag of the case used.
        N: Degree of the polynomial for polynomial branches.
        band: k for the negative band branch.
        func: The (anti-)consistent function of 2v when one was used.
        prefix_len: Coefficients used for truncated series.
    """

    v: RealPoint
    kind: Kind
    value: object
    value_err: object
    set: object
    branch: Branch
    N: Optional[int] = None
    band: Optional[int] = None
    func: Optional[SignSeq] = field(default=None, repr=False)
    prefix_len: Optional[int] = None

    @property
    def exact(self):
        return isinstance(self.value, Fraction) and self.value_err == 0 and self.set.exact

    def points(self):
        return self.set.points()


# numeric helpers


def _num(v, prec):
    """Fraction for rational points, mpmath number otherwise."""
    if isinstance(v, Rational):
        return v.value
    return v.to_mpf(prec)


def _round_err(value, prec):
    if isinstance(value, Fraction):
        return Fraction(0)
    return mpmath.ldexp(max(1, abs(value)), -(prec - 16))


def prefix_length(tol, cap=256):
    """Digits needed for points at ``tol``: log2(1/tol) plus a guard of 16."""
    return min(cap, max(24, math.ceil(-math.log2(float(tol))) + 16))


def _mpq(q):
    return mpmath.mpf(q.numerator) / q.denominator


def _half_value(F):
    return F.eval(HALF)[0]


# operations


def extremum_points_from_series(F, prefix_len=64):
    """x- = 1/2 - F(1/2)/4 and its mirror, from a series F of the point 2v.

    Exact when F is a polynomial or has a closed form. Otherwise the first
    ``prefix_len`` digits x_n = (1 - c_{n-1})/2 are used and the point is
    known to within 2^-(prefix_len+1) around the returned midpoint.
    """
    if F.is_polynomial or F.closed_form is not None:
        x = HALF - _half_value(F) / 4
        return TwoPoints(x, Fraction(0), DyadicExpansion.from_fraction(x))
    coeffs = F.prefix(prefix_len)
    bits = tuple((1 - c) // 2 for c in coeffs)
    digits = DyadicExpansion.from_bits(bits, exact=False)
    half_width = Fraction(1, 2 ** (len(bits) + 1))
    return TwoPoints(digits.to_fraction() + half_width, half_width, digits)


def value_from_series(F, v, tol=1e-12, prec=DEFAULT_PRECISION):
    """M = 1/(2(1-v)) - 1/4 sum_n c_n (2v)^n sum_{p>=n} c_p / 2^p.

    The outer sum is cut at K with tail at most |v|^(K+1)/(2(1-|v|)) (each
    inner sum is bounded by 2^(1-n)). Inner sums are exact for closed forms;
    otherwise they are cut at a prefix long enough to keep their total error
    below ``tol/4``.

    Returns:
        ``(value, err)`` as mpmath numbers.
    """
    v = as_point(v, prec)
    a = abs(float(v))
    K = truncation_index(a, float(tol) / 2)
    exact_inner = F.is_polynomial or F.closed_form is not None
    with mpmath.workprec(prec + 16):
        vv = v.to_mpf(prec + 16)
        two_v = 2 * vv
        if exact_inner:
            total_half = _half_value(F)
            n_inner = K + 1
        else:
            # sum_{n<=K} |2v|^n bounds how the inner tails accumulate
            weight = sum((2 * a) ** n for n in range(K + 1))
            extra = max(0, math.ceil(math.log2(max(weight, 1) / float(tol))) + 1)
            n_inner = K + 1 + extra
        coeffs = F.prefix(n_inner) if not F.is_polynomial else F.poly()
        coeffs = list(coeffs) + [0] * max(0, K + 1 - len(coeffs))
        # inner sums R_n, from the right end
        R = [Fraction(0)] * (K + 1)
        if exact_inner:
            acc = total_half
            for n in range(K + 1):
                R[n] = acc
                acc -= Fraction(coeffs[n], 2**n)
        else:
            acc = Fraction(0)
            for p in range(len(coeffs) - 1, -1, -1):
                acc += Fraction(coeffs[p], 2**p)
                if p <= K:
                    R[p] = acc
        s = mpmath.mpf(0)
        power = mpmath.mpf(1)
        for n in range(K + 1):
            if coeffs[n]:
                s += coeffs[n] * power * _mpq(R[n])
            power *= two_v
        value = 1 / (2 * (1 - vv)) - s / 4
        err = mpmath.mpf(a) ** (K + 1) / (2 * (1 - a))
        if not exact_inner:
            err += mpmath.ldexp(weight, -(len(coeffs) - 1)) / 4
        err += _round_err(value, prec)
    return +value, +err


def band_from_polynomial(P, v, prec=DEFAULT_PRECISION):
    """Plateau [a_N, b_N] of S_{v,N} and its extremal value M_{v,N}.

    a_N = 1/2 - P(1/2)/4 - 1/2^(N+2), b_N = a_N + 1/2^(N+1) and
    M_{v,N} = (1 - v^(N+1))/(2(1-v)) - 1/4 sum_{n<=N} c_n (2v)^n sum_{i=n..N} c_i/2^i.
    """
    v = as_point(v, prec)
    c = P.poly()
    N = len(c) - 1
    a = HALF - _half_value(P) / 4 - Fraction(1, 2 ** (N + 2))
    b = a + Fraction(1, 2 ** (N + 1))
    vv = _num(v, prec)
    with mpmath.workprec(prec + 16):
        inner = [Fraction(0)] * (N + 2)
        for i in range(N, -1, -1):
            inner[i] = inner[i + 1] + Fraction(c[i], 2**i)
        s = sum(c[n] * (2 * vv) ** n * inner[n] for n in range(N + 1))
        M = (1 - vv ** (N + 1)) / (2 * (1 - vv)) - s / 4
    return a, b, M


def _block_digits(P):
    block = "".join(str((1 - c) // 2) for c in P.poly())
    return block, "".join("1" if d == "0" else "0" for d in block)


def assemble_blockcantor(P, v, prec=DEFAULT_PRECISION):
    """Block Cantor extremum set and value M_{v,N} / (1 - v^(N+1)).

    Requires v^(N+1) > 0.
    """
    v = as_point(v, prec)
    N = P.degree
    if not (N % 2 == 1 or v.sign() > 0):
        raise InvalidParameter("block Cantor sets need v^(N+1) > 0")
    a, b, M_N = band_from_polynomial(P, v, prec)
    block, comp = _block_digits(P)
    inf = HALF - _half_value(attached_series(P, "plus")) / 4
    sup_left = HALF - _half_value(attached_series(P, "minus")) / 4
    vv = _num(v, prec)
    with mpmath.workprec(prec + 16):
        value = M_N / (1 - vv ** (N + 1))
    cantor = BlockCantor(block, comp, Fraction(1, N + 1), inf, 1 - inf, sup_left, a, b)
    return cantor, value


def assemble_shifted(P, v, opposite, prec=DEFAULT_PRECISION):
    """Extremum set for v^(N+1) < 0 from the opposite extremum report.

    Every point y of the opposite set gives the pair
    1/2 +- (P(1/2)/4 + 1/2^(N+2) - y/2^(N+1)); the value is
    M_{v,N} + v^(N+1) * (opposite value).
    """
    v = as_point(v, prec)
    N = P.degree
    if N % 2 == 1 or v.sign() >= 0:
        raise InvalidParameter("shifted sets need v^(N+1) < 0")
    a, b, M_N = band_from_polynomial(P, v, prec)
    shift = _half_value(P) / 4 + Fraction(1, 2 ** (N + 2))
    shifted = ShiftedMinSet(a, b, N, shift, opposite.set)
    pts = shifted.points()
    vv = _num(v, prec)
    with mpmath.workprec(prec + 16):
        value = M_N + vv ** (N + 1) * opposite.value
    err = abs(vv) ** (N + 1) * opposite.value_err
    if pts is not None and len(pts) == 4:
        ref_err = getattr(opposite.set, "err", 0) / 2 ** (N + 1)
        return FourPoints(tuple(pts), Fraction(ref_err)), value, err
    return shifted, value, err


def neg_band_value(v, k, prec=DEFAULT_PRECISION):
    """Maximum for v in the k-th negative band (v_{k-1}, v_k).

    M = 1/2 + (4v-1)/(5 2^(2k-1) (1-2v)) - 3 v^(2k+1) / (5 (1-v^2)(1-2v)).
    """
    vv = _num(as_point(v, prec), prec)
    with mpmath.workprec(prec + 16):
        return (HALF + (4 * vv - 1) / (5 * 2 ** (2 * k - 1) * (1 - 2 * vv))
                - 3 * vv ** (2 * k + 1) / (5 * (1 - vv**2) * (1 - 2 * vv)))


def global_extremum(v, kind="max", tol=1e-12, prec=DEFAULT_PRECISION, max_len=None):
    """Global maximum or minimum of T_v on [0, 1] and the set where it is attained.

    Args:
        v: Parameter in (-1, 1): RealPoint, ``"p/q"``, int, Fraction or float.
        kind: ``"max"`` or ``"min"``.
        tol: Target accuracy for values and for points known only by digits.
        prec: Working precision in bits for non-rational inputs.
        max_len: Coefficient budget for the construction (default from tol).

    Raises:
        InvalidParameter: |v| >= 1.
        SignAmbiguous: A float v is too close to a point with a polynomial.
    """
    v = as_point(v, prec)
    kind = Kind.coerce(kind)
    if not (v.compare(-1) > 0 and v.compare(1) < 0):
        raise InvalidParameter(f"v must lie in (-1, 1), got {v}")
    L = max_len or prefix_length(tol)
    if kind is Kind.MIN:
        return _minimum(v, prec)
    return _maximum(v, tol, prec, L)


def _finish(v, kind, value, err, set_, branch, prec, **kw):
    if err is None:
        err = _round_err(value, prec)
    return ExtremumReport(v, kind, value, err, set_, branch, **kw)


def _minimum(v, prec):
    c = v.compare(-HALF)
    if c > 0:
        return _finish(v, Kind.MIN, Fraction(0), Fraction(0),
                       TwoPoints(Fraction(0), digits=DyadicExpansion.from_fraction(0)),
                       Branch.MIN_AT_ENDS, prec)
    if c == 0:
        P = SignSeq.polynomial([1, 1])
        cantor, value = assemble_blockcantor(P, v, prec)
        return _finish(v, Kind.MIN, value, None, cantor, Branch.BLOCK_CANTOR, prec,
                       N=1, func=P)
    F = SignSeq.from_closed_form(PairAlt(), 8)
    pts = extremum_points_from_series(F)
    vv = _num(v, prec)
    with mpmath.workprec(prec + 16):
        value = (1 + 2 * vv) / (5 * (1 - vv**2))
    return _finish(v, Kind.MIN, value, None, pts, Branch.MIN_AT_FIFTHS, prec, func=F)


def _maximum(v, tol, prec, L):
    vv = _num(v, prec)
    if v.compare(HALF) > 0:
        with mpmath.workprec(prec + 16):
            value = 1 / (3 * (1 - vv))
        return _finish(v, Kind.MAX, value, None, TwoPoints(Fraction(1, 3),
                       digits=DyadicExpansion.from_fraction(Fraction(1, 3))),
                       Branch.MAX_AT_THIRDS, prec)
    if v.compare(HALF) == 0:
        P = SignSeq.polynomial([1, -1])
        cantor, value = assemble_blockcantor(P, v, prec)
        return _finish(v, Kind.MAX, value, None, cantor, Branch.BLOCK_CANTOR, prec,
                       N=1, func=P)
    if v.compare(-HALF) >= 0 and v.compare(Fraction(1, 4)) <= 0:
        return _finish(v, Kind.MAX, HALF, Fraction(0), OnePoint(), Branch.MAX_AT_HALF, prec)
    w = v.scale(2)
    if v.compare(-HALF) < 0:
        k, exact = neg_band(w)
        if exact:
            P = SignSeq.polynomial([1] + [-1] * (2 * k))
            opposite = _minimum(v, prec)
            set_, value, err = assemble_shifted(P, v, opposite, prec)
            return _finish(v, Kind.MAX, value, err + _round_err(value, prec), set_,
                           Branch.SHIFTED, prec, N=2 * k, band=k, func=P)
        F = SignSeq.from_closed_form(NegKFamily(k), 2 * k + 4)
        value = neg_band_value(v, k, prec)
        return _finish(v, Kind.MAX, value, None, extremum_points_from_series(F),
                       Branch.MAX_NEG_BAND, prec, band=k, func=F)
    # v in (1/4, 1/2)
    res = consistent_function(w, Mode.CONSISTENT, max_len=L)
    F = res.func
    if res.terminated:
        cantor, value = assemble_blockcantor(F, v, prec)
        return _finish(v, Kind.MAX, value, None, cantor, Branch.BLOCK_CANTOR, prec,
                       N=F.degree, func=F)
    proven = F.closed_form is not None or isinstance(w, Rational)
    pts = extremum_points_from_series(F, L)
    value, err = value_from_series(F, v, tol, prec)
    branch = Branch.SERIES if proven else Branch.SERIES_TRUNCATED
    return _finish(v, Kind.MAX, value, err, pts, branch, prec, func=F,
                   prefix_len=None if F.closed_form is not None else L)
