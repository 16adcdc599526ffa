"""Unitary sign sequences: c_0 = 1 and every c_k in {-1, +1}.

A :class:`SignSeq` is either a fixed polynomial or a series prefix that can
be extended on demand from a deterministic source. Series with a known sum
carry a :class:`ClosedForm` (a rational function with integer coefficients),
which gives exact values at rational points.
"""

import enum
import itertools
import re
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import _poly
from .errors import InvalidParameter, TolNotReached
from .realpoint import DEFAULT_PRECISION, Rational, RealPoint

__all__ = [
    "ClosedForm",
    "Geom",
    "AltGeom",
    "PairAlt",
    "TwoToOne",
    "NegKFamily",
    "SqrtLift",
    "RationalFunction",
    "SignSeq",
    "Lex",
    "LexResult",
    "lex_compare",
    "attached_series",
    "is_intermediate",
    "evaluate",
    "poly_to_str",
    "parse_poly",
]


# closed forms


def _padd(a, b):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _substitute_power(p, m):
    """Coefficients of p(x**m)."""
    out = [0] * ((len(p) - 1) * m + 1)
    for i, c in enumerate(p):
        out[i * m] = c
    return out


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


class ClosedForm:
    """A rational function ``num(x) / den(x)`` with ``den(0) = 1``.

    Subclasses only fix ``num``/``den`` and a display name.
    """

    name = "RationalFunction"

    def __init__(self, num, den):
        num = [Fraction(c) for c in num]
        den = [Fraction(c) for c in den]
        if den[0] == 0:
            raise InvalidParameter("closed form denominator must not vanish at 0")
        if den[0] != 1:
            num = [c / den[0] for c in num]
            den = [c / den[0] for c in den]
        self.num = tuple(_trim(num))
        self.den = tuple(_trim(den))

    def coefficients(self):
        """Yield the Taylor coefficients at 0, forever."""
        num, den = self.num, self.den
        hist = []
        for n in itertools.count():
            c = num[n] if n < len(num) else 0
            for j in range(1, min(len(den), n + 1)):
                c -= den[j] * hist[n - j]
            hist.append(c)
            if c.denominator != 1:
                raise InvalidParameter(f"{self} has a non-integer coefficient at {n}")
            yield int(c)

    def __call__(self, x, prec=DEFAULT_PRECISION):
        """Exact value at a rational, mpmath value otherwise."""
        if isinstance(x, Rational):
            x = x.value
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            return _poly.eval_exact(self.num, x) / _poly.eval_exact(self.den, x)
        with mpmath.workprec(prec):
            if isinstance(x, RealPoint):
                x = x.to_mpf(prec)
            else:
                x = mpmath.mpf(x)
            return _eval_fraction_poly(self.num, x) / _eval_fraction_poly(self.den, x)

    def numerator_poly(self):
        """Integer numerator with the denominator scaled to match."""
        return _poly.normalize(self.num)

    def reduced(self):
        """Same function with common factors cancelled."""
        n, d = _poly.cancel(self.num, self.den)
        return RationalFunction(n, d)

    def __eq__(self, other):
        if not isinstance(other, ClosedForm):
            return NotImplemented
        # cross-multiplied equality of rational functions
        return _trim(_pmul(self.num, other.den)) == _trim(_pmul(other.num, self.den))

    __hash__ = object.__hash__

    def formula(self):
        return f"({poly_to_str(self.num)}) / ({poly_to_str(self.den)})"

    def __repr__(self):
        return f"{self.name}"

    def __str__(self):
        return f"{repr(self)} = {self.formula()}"


def _eval_fraction_poly(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + (mpmath.mpf(c.numerator) / c.denominator)
    return acc


class RationalFunction(ClosedForm):
    name = "RationalFunction"

    def __repr__(self):
        return f"RationalFunction({self.formula()})"

    __str__ = __repr__


class Geom(ClosedForm):
    """1 / (1 - x): all coefficients +1."""

    name = "Geom"

    def __init__(self):
        super().__init__([1], [1, -1])


class AltGeom(ClosedForm):
    """1 / (1 + x): alternating signs."""

    name = "AltGeom"

    def __init__(self):
        super().__init__([1], [1, 1])


class PairAlt(ClosedForm):
    """(1 + x) / (1 + x^2): signs ++--++--..."""

    name = "PairAlt"

    def __init__(self):
        super().__init__([1, 1], [1, 0, 1])


class TwoToOne(ClosedForm):
    """(1 - 2x) / (1 - x) = 1 - x - x^2 - ..."""

    name = "TwoToOne"

    def __init__(self):
        super().__init__([1, -2], [1, -1])


class NegKFamily(ClosedForm):
    """(1-2x)/(1-x) + 2x^(2k+1) / ((1-x)(1+x^2)).

    Coefficients: 1, then 2k minus signs, then the pattern ++-- repeating.
    """

    name = "NegKFamily"

    def __init__(self, k):
        if k < 1:
            raise InvalidParameter("k must be >= 1")
        self.k = k
        # common denominator (1-x)(1+x^2)
        den = _pmul([1, -1], [1, 0, 1])
        num = _pmul([1, -2], [1, 0, 1])
        num = _padd(num, [0] * (2 * k + 1) + [2])
        super().__init__(num, den)

    def __repr__(self):
        return f"NegKFamily({self.k})"


class SqrtLift(ClosedForm):
    """prod_{j<n} (1 - x^(2^j)) * inner(x^(2^n))."""

    name = "SqrtLift"

    def __init__(self, inner, n=1):
        if n < 1:
            raise InvalidParameter("n must be >= 1")
        if isinstance(inner, SqrtLift):
            inner, n = inner.inner, inner.n + n
        self.inner = inner
        self.n = n
        m = 2**n
        num = _substitute_power(list(inner.num), m)
        for j in range(n):
            num = _pmul(num, [1] + [0] * (2**j - 1) + [-1])
        super().__init__(num, _substitute_power(list(inner.den), m))

    def __repr__(self):
        return f"SqrtLift({self.inner!r}, {self.n})"


# sign sequences


class SignSeq:
    """Unitary coefficient sequence, finite or lazily extended.

    Args:
        coeffs: Known coefficients, starting with +1.
        source: Iterator yielding the coefficients after ``coeffs`` (series only).
        closed_form: Optional :class:`ClosedForm` whose expansion is this series.
        polynomial: True for a finite polynomial of degree ``len(coeffs)-1``.

    Reads of already materialized coefficients are lock free; extension is
    serialized by an internal lock.
    """

    def __init__(self, coeffs, source=None, closed_form=None, polynomial=False):
        coeffs = [int(c) for c in coeffs]
        if not coeffs or coeffs[0] != 1:
            raise InvalidParameter("a unitary sequence starts with +1")
        if any(c not in (-1, 1) for c in coeffs):
            raise InvalidParameter("unitary coefficients are +1 or -1")
        if polynomial and (source is not None or closed_form is not None):
            raise InvalidParameter("a polynomial cannot be extended")
        if source is None and closed_form is not None:
            source = itertools.islice(closed_form.coefficients(), len(coeffs), None)
        self._coeffs = coeffs
        self._source = source
        self.closed_form = closed_form
        self.is_polynomial = bool(polynomial)
        self._lock = threading.Lock()

    # constructors

    @classmethod
    def polynomial(cls, coeffs):
        return cls(coeffs, polynomial=True)

    @classmethod
    def from_closed_form(cls, form, prefix_len=1):
        return cls(list(itertools.islice(form.coefficients(), prefix_len)), closed_form=form)

    @classmethod
    def from_rule(cls, rule, prefix_len=1):
        """Series whose n-th coefficient is ``rule(n)``."""
        gen = (rule(n) for n in itertools.count())
        head = list(itertools.islice(gen, prefix_len))
        return cls(head, source=gen)

    # access

    @property
    def degree(self):
        if not self.is_polynomial:
            raise InvalidParameter("a series has no degree")
        return len(self._coeffs) - 1

    @property
    def materialized(self):
        return len(self._coeffs)

    @property
    def extendable(self):
        return self._source is not None

    def _extend(self, n):
        if n <= len(self._coeffs) or self._source is None:
            return
        with self._lock:
            while len(self._coeffs) < n:
                try:
                    c = int(next(self._source))
                except StopIteration:
                    self._source = None
                    break
                if c not in (-1, 1):
                    raise InvalidParameter(f"source produced non-unitary coefficient {c}")
                self._coeffs.append(c)

    def available(self, n):
        """Number of coefficients obtainable up to ``n``."""
        if self.is_polynomial:
            return min(n, len(self._coeffs))
        self._extend(n)
        return min(n, len(self._coeffs))

    def prefix(self, n):
        """First ``n`` coefficients (fewer for polynomials and exhausted prefixes)."""
        self._extend(n)
        return tuple(self._coeffs[:n])

    def coeff(self, n):
        """c_n; 0 beyond the degree of a polynomial."""
        if n < 0:
            raise IndexError(n)
        self._extend(n + 1)
        if n < len(self._coeffs):
            return self._coeffs[n]
        if self.is_polynomial:
            return 0
        raise IndexError(f"coefficient {n} is not available")

    def __getitem__(self, n):
        return self.coeff(n)

    def coefficients(self):
        for n in itertools.count():
            if self.is_polynomial and n > self.degree:
                return
            try:
                yield self.coeff(n)
            except IndexError:
                return

    def poly(self, n=None):
        """Integer coefficient tuple of the polynomial or of the first ``n`` terms."""
        if self.is_polynomial:
            return tuple(self._coeffs)
        return self.prefix(n)

    # evaluation

    def eval(self, x, abs_tol=1e-15, prec=DEFAULT_PRECISION, max_terms=100_000):
        """Sum at ``|x| < 1`` with an error bound.

        Polynomials and closed forms are exact (bound 0) at rational ``x``.
        Otherwise the partial sum to K terms is returned with the geometric
        tail bound ``|x|**(K+1) / (1 - |x|)``.
        """
        return evaluate(self, x, abs_tol, prec, max_terms)

    def __call__(self, x, **kw):
        return self.eval(x, **kw)[0]

    # display

    def signs(self, n=None):
        if n is None:
            n = self.materialized
        s = "".join("+" if c > 0 else "-" for c in self.prefix(n))
        if not self.is_polynomial:
            s += "..."
        return s

    def to_str(self, n=None):
        if n is None:
            n = self.materialized
        text = poly_to_str(self.prefix(n))
        if not self.is_polynomial:
            text += " + ..." if not text.endswith("...") else ""
        return text

    def __repr__(self):
        kind = "Polynomial" if self.is_polynomial else "Series"
        tag = f", {self.closed_form!r}" if self.closed_form is not None else ""
        return f"SignSeq.{kind}({self.signs(min(self.materialized, 32))}{tag})"

    @classmethod
    def parse(cls, text):
        """Parse ``"+--+"`` (polynomial), ``"+--+..."`` (prefix) or ``"1 - x - x^2"``."""
        t = text.strip().replace("−", "-").replace("…", "...")
        series = t.endswith("...")
        body = t[:-3].strip() if series else t
        if body and set(body) <= {"+", "-"}:
            coeffs = [1 if c == "+" else -1 for c in body]
        else:
            coeffs = parse_poly(body.rstrip("+ "))
        if series:
            return cls(coeffs)
        return cls.polynomial(coeffs)


def evaluate(F, x, abs_tol=1e-15, prec=DEFAULT_PRECISION, max_terms=100_000):
    exact = isinstance(x, (int, Fraction, Rational))
    if isinstance(x, Rational):
        x = x.value
    mag = abs(float(x))
    if mag >= 1:
        raise InvalidParameter("evaluation needs |x| < 1")
    if F.is_polynomial:
        return _sum_prefix(F.poly(), x, exact, prec), 0
    if F.closed_form is not None:
        return F.closed_form(x, prec), 0
    K = 0
    if mag > 0:
        K = 1
        while mag ** (K + 1) / (1 - mag) > abs_tol:
            K += 1
            if K >= max_terms:
                raise TolNotReached(mag ** (K + 1) / (1 - mag), abs_tol, K)
    n = F.available(K + 1)
    if n < K + 1:
        raise TolNotReached(mag**n / (1 - mag), abs_tol, n)
    # the bound is attained by 1/(1-x), so round it outwards
    err = mag ** (K + 1) / (1 - mag) * (1 + 2.0**-40)
    return _sum_prefix(F.prefix(K + 1), x, exact, prec), err


def _sum_prefix(coeffs, x, exact, prec):
    if exact:
        return _poly.eval_exact(coeffs, Fraction(x))
    with mpmath.workprec(prec):
        if isinstance(x, RealPoint):
            x = x.to_mpf(prec)
        return _poly.eval_mp(coeffs, mpmath.mpf(x))


# comparison and attached series


class Lex(enum.Enum):
    LESS = "Less"
    EQUAL_UP_TO = "Equal_up_to"
    GREATER = "Greater"


@dataclass(frozen=True)
class LexResult:
    order: Lex
    index: int  # first differing index, or the compared length when equal

    def __eq__(self, other):
        if isinstance(other, Lex):
            return self.order is other
        return super().__eq__(other)

    __hash__ = object.__hash__


def lex_compare(F, G, max_len=256):
    """Lexicographic comparison of coefficient sequences.

    A polynomial reads as 0 beyond its degree, so it sits between the two
    continuations with a next coefficient of -1 and +1. Comparison stops at
    ``max_len`` or when both sides run out of known coefficients.
    """
    for n in range(max_len):
        try:
            a = F.coeff(n)
            b = G.coeff(n)
        except IndexError:
            return LexResult(Lex.EQUAL_UP_TO, n)
        if a != b:
            return LexResult(Lex.LESS if a < b else Lex.GREATER, n)
        if F.is_polynomial and G.is_polynomial and n >= max(F.degree, G.degree):
            return LexResult(Lex.EQUAL_UP_TO, n + 1)
    return LexResult(Lex.EQUAL_UP_TO, max_len)


def attached_series(P, sign):
    """Periodic series built from the polynomial P.

    ``sign="plus"`` repeats the block (c_0..c_N); ``sign="minus"`` keeps the
    first block and repeats its negation. Sums: P/(1-x^(N+1)) and
    P(1-2x^(N+1))/(1-x^(N+1)).
    """
    if not P.is_polynomial:
        raise InvalidParameter("attached series need a polynomial")
    block = list(P.poly())
    m = len(block)
    period = [1] + [0] * (m - 1) + [-1]
    if sign in ("plus", "+", 1):
        form = RationalFunction(block, period)
        rule = lambda n: block[n % m]  # noqa: E731
    elif sign in ("minus", "-", -1):
        form = RationalFunction(_pmul(block, [1] + [0] * (m - 1) + [-2]), period)
        rule = lambda n: block[n] if n < m else -block[n % m]  # noqa: E731
    else:
        raise InvalidParameter(f"sign must be plus or minus, got {sign!r}")
    gen = (rule(n) for n in itertools.count(m))
    return SignSeq(block, source=gen, closed_form=form)


def is_intermediate(F, P, check_len=128):
    """True if F splits into blocks +-(c_0..c_N) of P, the first one positive.

    Only the first ``check_len`` coefficients (or as many as F has) are
    inspected.
    """
    block = P.poly()
    m = len(block)
    neg = tuple(-c for c in block)
    n = F.available(check_len)
    coeffs = F.prefix(n)
    if coeffs[:m] != block[: len(coeffs[:m])]:
        return False
    for start in range(m, n, m):
        chunk = coeffs[start:start + m]
        if chunk != block[: len(chunk)] and chunk != neg[: len(chunk)]:
            return False
    return True


# text


def poly_to_str(coeffs):
    """``1 - x - x^2 + x^3`` style rendering (rational coefficients allowed)."""
    parts = []
    for i, c in enumerate(coeffs):
        c = Fraction(c)
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if i == 0:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}{mono}" if a.denominator == 1 else f"({a}){mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(x(?:\^(\d+))?)?")


def parse_poly(text):
    """Inverse of :func:`poly_to_str` for integer coefficients."""
    t = text.replace(" ", "").replace("**", "^")
    if not t:
        raise InvalidParameter("empty polynomial")
    coeffs = {}
    pos = 0
    while pos < len(t):
        m = _TERM.match(t, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise InvalidParameter(f"cannot parse polynomial {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            e = int(m.group(4)) if m.group(4) else 1
        else:
            e = 0
        coeffs[e] = coeffs.get(e, 0) + sign * c
        pos = m.end()
    out = [0] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        out[e] = c
    return out
