"""Exact and high-precision real numbers.

Three representations share one interface:

* :class:`Rational` wraps a :class:`fractions.Fraction`; every decision is exact.
* :class:`AlgebraicRoot` is the unique root of an integer polynomial inside an
  isolating interval with rational endpoints. Signs of polynomials at the root
  are decided by interval refinement, and exact vanishing is detected with a
  polynomial gcd.
* :class:`FloatPoint` is an mpmath number at a stated binary precision. Sign
  decisions below the precision threshold raise :class:`SignAmbiguous`.
"""

import threading
from fractions import Fraction
from numbers import Rational as _RationalABC

import mpmath

from . import _poly
from .errors import InvalidParameter, SignAmbiguous

DEFAULT_PRECISION = 200


class RealPoint:
    """Common interface; use the module-level constructors."""

    is_exact = True

    def enclosure(self, bits):
        """Rational ``(lo, hi)`` containing the value, ``hi - lo <= 2**-bits``."""
        raise NotImplementedError

    def to_mpf(self, prec=DEFAULT_PRECISION):
        lo, hi = self.enclosure(prec + 8)
        with mpmath.workprec(prec + 16):
            return (mpmath.mpf(lo.numerator) / lo.denominator
                    + mpmath.mpf(hi.numerator) / hi.denominator) / 2

    def __float__(self):
        return float(self.to_mpf(64))

    def sign_poly(self, p, index=None):
        """Sign (-1, 0, 1) of the integer polynomial ``p`` at this point."""
        raise NotImplementedError

    def sign(self):
        return self.sign_poly((0, 1))

    def compare(self, other):
        """Three-way comparison with a rational or another point."""
        if isinstance(other, RealPoint):
            return _compare_points(self, other)
        q = Fraction(other)
        return self.sign_poly((-q.numerator, q.denominator))

    def __eq__(self, other):
        if isinstance(other, (RealPoint, int, Fraction)):
            return self.compare(other) == 0
        return NotImplemented

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    __hash__ = object.__hash__

    def scale(self, r):
        raise NotImplementedError

    def square(self):
        raise NotImplementedError

    def __neg__(self):
        return self.scale(-1)


class Rational(RealPoint):
    def __init__(self, value):
        self.value = Fraction(value)

    def enclosure(self, bits):
        return self.value, self.value

    def to_mpf(self, prec=DEFAULT_PRECISION):
        with mpmath.workprec(prec):
            return mpmath.mpf(self.value.numerator) / self.value.denominator

    def sign_poly(self, p, index=None):
        v = _poly.eval_exact(p, self.value)
        return (v > 0) - (v < 0)

    def compare(self, other):
        if isinstance(other, Rational):
            other = other.value
        if isinstance(other, RealPoint):
            return -other.compare(self.value)
        d = self.value - Fraction(other)
        return (d > 0) - (d < 0)

    def scale(self, r):
        return Rational(self.value * Fraction(r))

    def square(self):
        return Rational(self.value**2)

    def __repr__(self):
        return f"Rational({self.value})"

    def __str__(self):
        return str(self.value)


class AlgebraicRoot(RealPoint):
    """Unique root of ``poly`` (integer coefficients, constant term first) in ``[lo, hi]``.

    The interval is refined lazily; refinement is serialized by a lock so the
    object may be shared between threads.
    """

    def __init__(self, poly, lo, hi, check=True):
        self.poly = _poly.normalize(poly)
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            lo, hi = hi, lo
        self._lock = threading.Lock()
        self._exact = None
        slo = self._psign(lo)
        shi = self._psign(hi)
        if slo == 0:
            self._exact = lo
        elif shi == 0:
            self._exact = hi
        elif slo == shi:
            raise InvalidParameter("isolating interval must bracket a sign change")
        elif check and _poly.count_roots(self.poly, lo, hi) != 1:
            raise InvalidParameter("interval does not isolate a single root")
        self.lo, self.hi = lo, hi
        self._slo = slo

    def _psign(self, x):
        v = _poly.eval_exact(self.poly, x)
        return (v > 0) - (v < 0)

    @property
    def exact_rational(self):
        """The root as a Fraction when bisection happened to land on it."""
        return self._exact

    def _refine(self, bits):
        width = Fraction(1, 2**bits)
        with self._lock:
            if self._exact is not None:
                return
            lo, hi, slo = self.lo, self.hi, self._slo
            if hi - lo <= width:
                return
            # jump to a dyadic grid first so later midpoints stay cheap
            k = bits + 2
            while hi - lo > width:
                mid = (lo + hi) / 2
                if mid.denominator > 2**k:
                    mid = Fraction(int(mid * 2**k), 2**k)
                    if not lo < mid < hi:
                        mid = (lo + hi) / 2
                s = self._psign(mid)
                if s == 0:
                    self._exact = mid
                    break
                if s == slo:
                    lo = mid
                else:
                    hi = mid
            self.lo, self.hi = lo, hi

    def enclosure(self, bits):
        self._refine(bits)
        if self._exact is not None:
            return self._exact, self._exact
        return self.lo, self.hi

    def sign_poly(self, p, index=None):
        p = _poly.normalize(p)
        if len(p) == 1:
            return (p[0] > 0) - (p[0] < 0)
        bits = 64
        zero_checked = False
        while True:
            lo, hi = self.enclosure(bits)
            if lo == hi:
                v = _poly.eval_exact(p, lo)
                return (v > 0) - (v < 0)
            s = _interval_sign(p, lo, hi)
            if s:
                return s
            if not zero_checked:
                zero_checked = True
                if self.shares_root_with(p):
                    return 0
            bits *= 2

    def shares_root_with(self, p):
        """True when ``p`` vanishes exactly at this root."""
        g = _poly.gcd(self.poly, _poly.normalize(p))
        if len(g) == 1:
            return False
        lo, hi = self.enclosure(8)
        if lo == hi:
            return _poly.eval_exact(g, lo) == 0
        return _poly.count_roots(g, lo, hi) > 0

    def scale(self, r):
        r = Fraction(r)
        if r == 0:
            return Rational(0)
        if self._exact is not None:
            return Rational(self._exact * r)
        return _collapse(AlgebraicRoot(_poly.scale_argument(self.poly, r),
                                       self.lo * r, self.hi * r, check=False))

    def square(self):
        if self._exact is not None:
            return Rational(self._exact**2)
        q = _poly.squarefree(_poly.even_odd_square(self.poly))
        bits = 16
        while True:
            lo, hi = self.enclosure(bits)
            if lo == hi:
                return Rational(lo * lo)
            if lo >= 0 or hi <= 0:
                a, b = sorted((lo * lo, hi * hi))
                if (_poly.eval_exact(q, a) * _poly.eval_exact(q, b) < 0
                        and _poly.count_roots(q, a, b) == 1):
                    return _collapse(AlgebraicRoot(q, a, b, check=False))
            bits *= 2

    def __repr__(self):
        return f"AlgebraicRoot({list(self.poly)}, [{float(self.lo):.12g}, {float(self.hi):.12g}])"

    def __str__(self):
        return mpmath.nstr(self.to_mpf(80), 15)


class FloatPoint(RealPoint):
    """A binary floating-point value held at ``prec`` bits."""

    is_exact = False

    def __init__(self, value, prec=DEFAULT_PRECISION):
        self.prec = int(prec)
        with mpmath.workprec(self.prec):
            self.value = mpmath.mpf(value)

    @property
    def threshold(self):
        return mpmath.ldexp(1, -(self.prec - 8))

    def enclosure(self, bits):
        man, exp = mpmath.mpf(self.value).man_exp
        q = Fraction(int(man)) * (Fraction(2) ** int(exp))
        return q, q

    def to_mpf(self, prec=None):
        return self.value

    def sign_poly(self, p, index=None):
        with mpmath.workprec(self.prec):
            x = self.value
            val = _poly.eval_mp(p, x)
            scale = _poly.eval_mp([abs(c) for c in p], abs(x))
            if abs(val) <= self.threshold * max(scale, 1):
                raise SignAmbiguous(index if index is not None else len(p) - 1,
                                    magnitude=val, precision=self.prec)
            return 1 if val > 0 else -1

    def compare(self, other):
        if isinstance(other, FloatPoint):
            other_v = other.value
        elif isinstance(other, RealPoint):
            other_v = other.to_mpf(self.prec + 16)
        else:
            q = Fraction(other)
            with mpmath.workprec(self.prec + 16):
                other_v = mpmath.mpf(q.numerator) / q.denominator
        with mpmath.workprec(self.prec + 16):
            d = self.value - other_v
            ulp = mpmath.ldexp(max(abs(self.value), abs(other_v), mpmath.mpf(2) ** -self.prec),
                               -(self.prec - 1))
            if abs(d) <= ulp:
                return 0
            return 1 if d > 0 else -1

    def scale(self, r):
        r = Fraction(r)
        with mpmath.workprec(self.prec):
            return FloatPoint(self.value * r.numerator / r.denominator, self.prec)

    def square(self):
        with mpmath.workprec(self.prec):
            return FloatPoint(self.value**2, self.prec)

    def __repr__(self):
        return f"FloatPoint({mpmath.nstr(self.value, 20)}, prec={self.prec})"

    def __str__(self):
        return mpmath.nstr(self.value, 15)


def _interval_sign(p, lo, hi):
    """Sign of p over [lo, hi] if it cannot vanish there, else 0."""
    mid = (lo + hi) / 2
    rad = (hi - lo) / 2
    value = _poly.eval_exact(p, mid)
    bound = _poly.derivative_bound(p, max(abs(lo), abs(hi))) * rad
    if abs(value) > bound:
        return 1 if value > 0 else -1
    return 0


def _compare_points(a, b):
    if isinstance(b, Rational):
        return a.compare(b.value)
    if isinstance(a, Rational):
        return -b.compare(a.value)
    if isinstance(a, FloatPoint):
        return a.compare(b)
    if isinstance(b, FloatPoint):
        return -b.compare(a)
    bits = 32
    checked = False
    while True:
        alo, ahi = a.enclosure(bits)
        blo, bhi = b.enclosure(bits)
        if ahi < blo:
            return -1
        if bhi < alo:
            return 1
        if alo == ahi and blo == bhi:
            return 0
        if alo == ahi:
            return -b.compare(alo)
        if blo == bhi:
            return a.compare(blo)
        if not checked and bits >= 64:
            checked = True
            g = _poly.gcd(a.poly, b.poly)
            if len(g) > 1:
                lo, hi = max(alo, blo), min(ahi, bhi)
                if _poly.count_roots(g, lo, hi) > 0:
                    return 0
        bits *= 2


def as_point(value, prec=DEFAULT_PRECISION):
    """Coerce ints, Fractions, floats, mpf, strings and points to a RealPoint.

    Strings of the form ``"p/q"`` or integers become exact rationals; decimal
    strings and floats become :class:`FloatPoint` at ``prec`` bits.
    """
    if isinstance(value, RealPoint):
        return value
    if isinstance(value, (int, Fraction, _RationalABC)) and not isinstance(value, bool):
        return Rational(value)
    if isinstance(value, str):
        s = value.strip().replace("−", "-")
        if "/" in s or s.lstrip("+-").isdigit():
            return Rational(Fraction(s))
        with mpmath.workprec(prec):
            return FloatPoint(mpmath.mpf(s), prec)
    if isinstance(value, (float, mpmath.mpf)):
        return FloatPoint(value, prec)
    raise TypeError(f"cannot interpret {value!r} as a real point")


def nth_root(r, n, lo=None, hi=None):
    """Positive ``n``-th root of the positive rational ``r``."""
    r = Fraction(r)
    if r <= 0:
        raise InvalidParameter("nth_root needs r > 0")
    poly = [-r.numerator] + [0] * (n - 1) + [r.denominator]
    if lo is None:
        lo, hi = Fraction(0), max(Fraction(1), r)
    return _collapse(AlgebraicRoot(poly, lo, hi))


def root_in(poly, lo, hi):
    """The root of ``poly`` isolated in ``[lo, hi]``."""
    return _collapse(AlgebraicRoot(poly, lo, hi))


def _collapse(root):
    if root.exact_rational is not None:
        return Rational(root.exact_rational)
    if len(root.poly) == 2:
        return Rational(Fraction(-root.poly[0], root.poly[1]))
    return root


_EXPR_CHARS = set("0123456789+-*/^(). ,sqrtoi")


def from_expression(text, prec=DEFAULT_PRECISION):
    """Exact point from a radical expression such as ``"1/(2*sqrt(2))"``.

    Integers and ``p/q`` give rationals; decimals give floats at ``prec``
    bits; anything else is parsed with sympy (only digits, arithmetic,
    ``sqrt`` and ``root``) and becomes an :class:`AlgebraicRoot` of its
    minimal polynomial.
    """
    s = text.strip().replace("−", "-")
    try:
        return as_point(s, prec)
    except (ValueError, ZeroDivisionError):
        pass
    if not set(s) <= _EXPR_CHARS:
        raise InvalidParameter(f"cannot parse real number {text!r}")
    import sympy

    x = sympy.Symbol("x")
    try:
        expr = sympy.sympify(s.replace("^", "**"), locals={"sqrt": sympy.sqrt,
                                                              "root": sympy.root})
        if not expr.is_real:
            raise InvalidParameter(f"{text!r} is not a real number")
        if expr.is_Rational:
            return Rational(Fraction(int(expr.p), int(expr.q)))
        mp = sympy.Poly(sympy.minimal_polynomial(expr, x), x)
    except (sympy.SympifyError, TypeError, NotImplementedError) as exc:
        raise InvalidParameter(f"cannot parse real number {text!r}") from exc
    coeffs = [int(c) for c in reversed(mp.all_coeffs())]
    approx = Fraction(str(sympy.N(expr, 60)))
    eps = Fraction(1, 10**20)
    while True:
        lo, hi = approx - eps, approx + eps
        if _poly.count_roots(_poly.normalize(coeffs), lo, hi) == 1:
            return root_in(coeffs, lo, hi)
        eps /= 2**16
