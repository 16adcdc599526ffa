"""Consistent and anti-consistent unitary functions of a point w.

The consistent function of w is built coefficient by coefficient: with
S_n = c_0 + c_1 w + ... + c_n w^n, the next coefficient is ``-sign(S_n)``
(``+sign(S_n)`` for the anti-consistent one) and the construction stops with
a polynomial as soon as S_n = 0. Every step is a sign decision, so the
arithmetic depends on the kind of point:

* rationals use one exact integer accumulator;
* algebraic roots use a dyadic enclosure of w with an integer bound on the
  derivative, refined on demand, and a gcd test for exact vanishing;
* floats use mpmath and raise :class:`SignAmbiguous` below the precision.

Closed forms are known for large parts of the line; :func:`consistent_function`
tries them before falling back to the construction.
"""

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import InvalidParameter, SignAmbiguous
from .realpoint import AlgebraicRoot, FloatPoint, Rational, as_point
from .unitary import (
    AltGeom,
    Geom,
    NegKFamily,
    PairAlt,
    SignSeq,
    SqrtLift,
    TwoToOne,
)

DEFAULT_MAX_LEN = 256
UNBOUNDED = "Unbounded"

__all__ = [
    "Mode",
    "ConsistencyResult",
    "construct",
    "consistent_function",
    "check_polynomial_criterion",
    "catalog_consistent",
    "catalog_anticonsistent",
    "locate_wk",
    "locate_un",
    "sqrt_lift",
    "neg_band",
    "sign_run_bound",
    "residual_at_self",
    "UNBOUNDED",
]


class Mode(enum.Enum):
    CONSISTENT = "Consistent"
    ANTI = "AntiConsistent"

    @classmethod
    def coerce(cls, mode):
        if isinstance(mode, cls):
            return mode
        key = str(mode).lower().replace("-", "").replace("_", "")
        if key in ("consistent", "max", "c"):
            return cls.CONSISTENT
        if key in ("anticonsistent", "anti", "min", "a"):
            return cls.ANTI
        raise InvalidParameter(f"unknown mode {mode!r}")


@dataclass
class ConsistencyResult:
    """Outcome of :func:`construct` or :func:`consistent_function`.

    Attributes:
        func: The polynomial, or the series with ``prefix_len`` coefficients
            already materialized (more are produced on demand).
        kind: Consistent or anti-consistent.
        terminated: True when ``func`` is a polynomial.
        prefix_len: Coefficients decided when the result was returned.
        source: ``"catalog"``, ``"sqrt_chain"`` or ``"construct"``.
    """

    func: SignSeq
    kind: Mode
    terminated: bool
    prefix_len: int
    source: str = "construct"


# sign engine


class _PartialSums:
    """Sign of S_n(w) as coefficients are pushed one at a time."""

    def __init__(self, w):
        self.w = w
        self.coeffs = []
        if isinstance(w, Rational):
            self._mode = "rational"
            self.p, self.q = w.value.numerator, w.value.denominator
            self.A = 0
            self.pn = 1
        elif isinstance(w, AlgebraicRoot):
            self._mode = "algebraic"
            self.bits = 64
            self._zero_checked = -1
            self._setup_interval()
        elif isinstance(w, FloatPoint):
            self._mode = "float"
            self.prec = w.prec
            self.S = mpmath.mpf(0)
            self.scale = mpmath.mpf(0)
            self.wn = mpmath.mpf(1)
        else:
            raise TypeError(f"unsupported point {w!r}")

    # algebraic helpers

    def _setup_interval(self):
        lo, hi = self.w.enclosure(self.bits)
        if lo == hi:
            # bisection hit the root exactly; continue as a rational
            coeffs = self.coeffs
            self._mode = "rational"
            self.p, self.q = lo.numerator, lo.denominator
            self.A, self.pn, self.coeffs = 0, 1, []
            for c in coeffs:
                self.push(c)
            return
        k = self.bits + 2
        lo_n = math.floor(lo * 2**k)
        hi_n = math.ceil(hi * 2**k)
        # work in units of 2**-(k+1): mid = M, radius = r, |x| <= R on the interval
        self.k = k + 1
        self.M = lo_n + hi_n
        self.r = hi_n - lo_n
        self.R = 2 * max(abs(lo_n), abs(hi_n))
        self.A = 0
        self.E = 0
        self.Mn = 1
        self.Rn1 = 1  # R**(n-1)
        coeffs, self.coeffs = self.coeffs, []
        for c in coeffs:
            self._push_algebraic(c)
            self.coeffs.append(c)

    def _push_algebraic(self, c):
        n = len(self.coeffs)
        shift = self.k
        if n == 0:
            self.A = c
            self.E = 0
            return
        self.Mn *= self.M
        self.A = (self.A << shift) + c * self.Mn
        self.E = (self.E << shift) + n * self.Rn1
        self.Rn1 *= self.R

    def push(self, c):
        if self._mode == "rational":
            n = len(self.coeffs)
            if n:
                self.pn *= self.p
            self.A = self.A * self.q + c * self.pn
        elif self._mode == "algebraic":
            self._push_algebraic(c)
        else:
            with mpmath.workprec(self.prec):
                if self.coeffs:
                    self.wn *= self.w.value
                self.S += c * self.wn
                self.scale += abs(self.wn)
        self.coeffs.append(c)

    def sign(self):
        if self._mode == "rational":
            return (self.A > 0) - (self.A < 0)
        if self._mode == "float":
            threshold = mpmath.ldexp(self.scale, -(self.prec - 8))
            if abs(self.S) <= threshold:
                raise SignAmbiguous(len(self.coeffs) - 1, magnitude=self.S,
                                    precision=self.prec)
            return 1 if self.S > 0 else -1
        n = len(self.coeffs)
        start_bits = self.bits
        while True:
            if abs(self.A) > self.r * self.E:
                return 1 if self.A > 0 else -1
            if self.r == 0:
                return 0
            if self._zero_checked != n and self.bits >= 2 * start_bits:
                self._zero_checked = n
                if self.w.shares_root_with(tuple(self.coeffs)):
                    return 0
            self.bits *= 2
            self._setup_interval()
            if self._mode != "algebraic":
                return self.sign()


# construction


def construct(w, mode=Mode.CONSISTENT, max_len=DEFAULT_MAX_LEN):
    """Build the (anti-)consistent function of ``w`` coefficient by coefficient.

    Args:
        w: Point (RealPoint, ``"p/q"``, int, Fraction or float).
        mode: :class:`Mode` or ``"consistent"``/``"anti"``.
        max_len: Coefficients to decide before returning a series.

    Returns:
        ConsistencyResult. A returned series keeps extending itself lazily; if
        a later partial sum vanishes, its source ends there.

    Raises:
        SignAmbiguous: A float ``w`` is too close to a partial-sum root.
    """
    if max_len < 2:
        raise InvalidParameter("max_len must be >= 2")
    w = as_point(w)
    mode = Mode.coerce(mode)
    flip = -1 if mode is Mode.CONSISTENT else 1
    sums = _PartialSums(w)
    coeffs = [1]
    sums.push(1)
    while True:
        s = sums.sign()
        if s == 0:
            return ConsistencyResult(SignSeq.polynomial(coeffs), mode, True, len(coeffs))
        if len(coeffs) >= max_len:
            break
        c = flip * s
        coeffs.append(c)
        sums.push(c)

    def more(c=flip * s):
        while True:
            sums.push(c)
            yield c
            s2 = sums.sign()
            if s2 == 0:
                return
            c = flip * s2

    func = SignSeq(coeffs, source=more())
    return ConsistencyResult(func, mode, False, len(coeffs))


def check_polynomial_criterion(P, w):
    """True iff P(w) = 0 and c_k (c_k w^k + ... + c_N w^N) > 0 for k = 1..N."""
    w = as_point(w)
    coeffs = P.poly()
    if w.sign_poly(coeffs, index=len(coeffs) - 1) != 0:
        return False
    for k in range(1, len(coeffs)):
        tail = (0,) * k + tuple(coeffs[k:])
        if coeffs[k] * w.sign_poly(tail, index=k) <= 0:
            return False
    return True


# catalogs


def catalog_anticonsistent(w):
    """Anti-consistent function from the closed-form catalog (always known)."""
    w = as_point(w)
    c = w.compare(-1)
    if c > 0:
        return SignSeq.from_closed_form(Geom(), 8)
    if c == 0:
        return SignSeq.polynomial([1, 1])
    return SignSeq.from_closed_form(PairAlt(), 8)


def catalog_consistent(w):
    """Consistent function from the catalog, or None for w in (1/2, 1)."""
    w = as_point(w)
    if w.compare(1) > 0:
        return SignSeq.from_closed_form(AltGeom(), 8)
    if w.compare(1) == 0:
        return SignSeq.polynomial([1, -1])
    if w.compare(-1) >= 0 and w.compare(Fraction(1, 2)) <= 0:
        return SignSeq.from_closed_form(TwoToOne(), 8)
    if w.compare(-1) < 0:
        k, exact = neg_band(w)
        if exact:
            return SignSeq.polynomial([1] + [-1] * (2 * k))
        return SignSeq.from_closed_form(NegKFamily(k), 2 * k + 4)
    return None


def neg_band(w, linear_cap=64, k_max=1 << 20):
    """Band index k with w in (w_{k-1}, w_k] for w < -1 (w_0 = -inf).

    Returns ``(k, exact)`` where ``exact`` flags w == w_k. Since
    (1 - t) P_{2k}(t) = 1 - 2t + t^(2k+1), the sign of P_{2k}(w) is that of
    this sparse trinomial: negative left of w_k, positive between w_k and -1.
    The search is linear up to ``linear_cap`` and then doubles and bisects,
    since the bands shrink like 1/k^2.
    """
    w = as_point(w)

    def side(k):
        return _sign_or_zero(w, (1, -2) + (0,) * (2 * k - 1) + (1,))

    for k in range(1, linear_cap + 1):
        s = side(k)
        if s <= 0:
            return k, s == 0
    lo, hi = linear_cap, 2 * linear_cap
    while side(hi) > 0:
        lo, hi = hi, 2 * hi
        if hi > k_max:
            raise InvalidParameter(f"{w} is too close to -1 to place in a band")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if side(mid) > 0:
            lo = mid
        else:
            hi = mid
    return hi, side(hi) == 0


def _sign_or_zero(w, p):
    try:
        return w.sign_poly(p)
    except SignAmbiguous:
        return 0


def _p_poly(n):
    """1 - x - x^2 - ... - x^n."""
    return (1,) + (-1,) * n


def locate_wk(k, tol=Fraction(1, 10**30)):
    """Negative root w_k of 1 - t - ... - t^(2k), an AlgebraicRoot in (-2, -1)."""
    if k < 1:
        raise InvalidParameter("k must be >= 1")
    root = AlgebraicRoot(_p_poly(2 * k), -2, -1, check=False)
    root.enclosure(_bits_for(tol))
    return root


def locate_un(n, tol=Fraction(1, 10**30)):
    """Positive root u_n of 1 - x - ... - x^n (u_1 = 1 exactly)."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    if n == 1:
        return Rational(1)
    root = AlgebraicRoot(_p_poly(n), Fraction(1, 2), Fraction(707, 1000), check=False)
    root.enclosure(_bits_for(tol))
    return root


def _bits_for(tol):
    tol = Fraction(tol) if not isinstance(tol, float) else Fraction(tol)
    return max(1, math.ceil(-math.log2(tol)))


# transforms


def sqrt_lift(F):
    """Consistent function of sqrt(d) from that of d in [1/2, 1).

    Coefficients interleave as b_{2k} = c_k, b_{2k+1} = -c_k, which is the
    series (1 - x) F(x^2).
    """
    if F.is_polynomial:
        out = []
        for c in F.poly():
            out += [c, -c]
        return SignSeq.polynomial(out)
    if F.closed_form is not None:
        return SignSeq.from_closed_form(SqrtLift(F.closed_form, 1), 2 * F.materialized)

    def rule():
        for n in itertools.count(F.materialized):
            c = F.coeff(n)
            yield c
            yield -c

    head = []
    for c in F.prefix(F.materialized):
        head += [c, -c]
    return SignSeq(head, source=rule())


def _chain_depth(w, max_depth=8):
    """n >= 1 with w^(2^n) = 1/2 for w in (1/2, 1), else None."""
    for n in range(1, max_depth + 1):
        m = 2**n
        s = _sign_or_zero(w, (-1,) + (0,) * (m - 1) + (2,))
        if s == 0:
            return n
        if s < 0:
            return None
    return None


def consistent_function(w, mode=Mode.CONSISTENT, max_len=DEFAULT_MAX_LEN):
    """Catalog first, then the square-root chain over 1/2, then construction."""
    w = as_point(w)
    mode = Mode.coerce(mode)
    if mode is Mode.ANTI:
        F = catalog_anticonsistent(w)
        return ConsistencyResult(F, mode, F.is_polynomial, F.materialized, "catalog")
    F = catalog_consistent(w)
    if F is not None:
        return ConsistencyResult(F, mode, F.is_polynomial, F.materialized, "catalog")
    n = _chain_depth(w)
    if n is not None:
        F = SignSeq.from_closed_form(SqrtLift(TwoToOne(), n), 2 ** (n + 1))
        return ConsistencyResult(F, mode, False, F.materialized, "sqrt_chain")
    return construct(w, mode, max_len)


def sign_run_bound(w):
    """Smallest m with 1 - w - ... - w^m < 0, or UNBOUNDED when w <= 1/2.

    It bounds the length of any run of equal nonzero coefficients in the
    consistent function of w.
    """
    w = as_point(w)
    if w.sign() <= 0:
        raise InvalidParameter("sign_run_bound needs w > 0")
    if w.compare(Fraction(1, 2)) <= 0:
        return UNBOUNDED
    for m in itertools.count(1):
        if _strict_sign(w, _p_poly(m), m) < 0:
            return m


def _strict_sign(w, p, m):
    return w.sign_poly(p, index=m)


def residual_at_self(F, w, tol=1e-10, max_terms=100_000):
    """|F(w)|, exact from a closed form or a polynomial, else from a long prefix.

    Returns:
        ``(residual, err_bound)``; the consistent function of w in [1/2, 1)
        vanishes at w, so the residual stays within ``tol + err_bound``.
    """
    w = as_point(w)
    x = w.value if isinstance(w, Rational) else w
    if F.is_polynomial or F.closed_form is not None:
        val, err = F.eval(x)
        return abs(val), err
    mag = float(w)
    if not 0 < abs(mag) < 1:
        raise InvalidParameter("residual needs 0 < |w| < 1")
    val, err = F.eval(x if isinstance(x, Fraction) else w.to_mpf(), abs_tol=tol,
                      max_terms=max_terms)
    return abs(val), err
