"""Binary expansions of points in [0, 1].

A :class:`DyadicExpansion` is a finite digit prefix followed by an optional
repeating block. Eventually periodic expansions are exactly the rationals, so
conversion in both directions is exact. A non-exact expansion carries only a
truncated prefix (``exact=False``) and stands for any number with those
leading digits.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidParameter, NonCanonicalExpansion


@dataclass(frozen=True)
class DyadicExpansion:
    """``0.prefix(period)`` in base 2.

    Attributes:
        prefix: Tuple of leading bits.
        period: Tuple of repeating bits, empty for a terminating expansion.
        exact: False when ``prefix`` is a truncation of an unknown tail.
        whole: Integer part, 1 only for the point 1 itself.
    """

    prefix: tuple = ()
    period: tuple = ()
    exact: bool = True
    whole: int = 0

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(b) for b in self.prefix))
        object.__setattr__(self, "period", tuple(int(b) for b in self.period))
        if any(b not in (0, 1) for b in self.prefix + self.period):
            raise InvalidParameter("digits must be 0 or 1")

    # construction

    @classmethod
    def from_fraction(cls, q):
        """Canonical expansion of a rational in [0, 1]."""
        q = Fraction(q)
        if not 0 <= q <= 1:
            raise InvalidParameter(f"{q} is outside [0, 1]")
        if q == 1:
            return cls((), (), True, 1)
        num, den = q.numerator, q.denominator
        a = 0
        while den % 2 == 0:
            den //= 2
            a += 1
        # q = num / (2**a * den) with den odd
        if den == 1:
            bits = [(num >> (a - 1 - i)) & 1 for i in range(a)]
            return cls(tuple(bits), ())
        b = 1
        while pow(2, b, den) != 1:
            b += 1
        # q * 2**a = head + r / den, and r/den = s / (2**b - 1)
        head, r = divmod(num, den)
        s = r * ((2**b - 1) // den)
        prefix = [(head >> (a - 1 - i)) & 1 for i in range(a)]
        period = [(s >> (b - 1 - i)) & 1 for i in range(b)]
        return cls(tuple(prefix), tuple(period))

    @classmethod
    def from_bits(cls, bits, exact=False):
        """Terminating or truncated expansion from a bit sequence."""
        return cls(tuple(bits), (), exact)

    @classmethod
    def parse(cls, text):
        """Parse ``"0.0101(01)"``, ``"0.011..."`` or a bare ``"p/q"`` rational."""
        t = text.strip().replace("…", "...")
        if "/" in t or t in ("0", "1"):
            return cls.from_fraction(Fraction(t))
        exact = not t.endswith("...")
        t = t.rstrip(".") if not exact else t
        if t.startswith("0."):
            t = t[2:]
        elif t.startswith("."):
            t = t[1:]
        else:
            raise InvalidParameter(f"cannot parse binary expansion {text!r}")
        period = ""
        if "(" in t:
            if not t.endswith(")"):
                raise InvalidParameter(f"unbalanced period in {text!r}")
            t, period = t[:-1].split("(", 1)
            if not period:
                raise InvalidParameter("empty period")
        bits = [int(c) for c in t if c in "01"]
        if len(bits) != len(t.replace("_", "")):
            raise InvalidParameter(f"non-binary digit in {text!r}")
        return cls(tuple(bits), tuple(int(c) for c in period), exact)

    # queries

    @property
    def is_canonical(self):
        return not self.period or any(b == 0 for b in self.period)

    def canonical(self):
        """Rewrite a trailing all-ones period as a carry into the prefix."""
        if self.is_canonical:
            return self
        return DyadicExpansion.from_fraction(self.to_fraction())

    def digit(self, i):
        """Digit ``x_i`` with 1-based index, as in ``x = sum x_i 2**-i``."""
        if i < 1:
            raise IndexError(i)
        if self.whole:
            return 0
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        if self.period:
            return self.period[(i - 1 - len(self.prefix)) % len(self.period)]
        if not self.exact:
            raise IndexError(f"digit {i} beyond truncated prefix")
        return 0

    def digits(self, n):
        return [self.digit(i) for i in range(1, n + 1)]

    @property
    def known_digits(self):
        """Number of digits determined by the data, or None when all are."""
        return None if self.exact else len(self.prefix)

    def to_fraction(self):
        if self.whole:
            return Fraction(1)
        a = len(self.prefix)
        head = int("".join(map(str, self.prefix)) or "0", 2)
        q = Fraction(head, 2**a)
        if self.period:
            b = len(self.period)
            s = int("".join(map(str, self.period)), 2)
            q += Fraction(s, (2**b - 1) * 2**a)
        return q

    def error_bound(self):
        """Width of the set of reals sharing this data (0 when exact)."""
        return Fraction(0) if self.exact else Fraction(1, 2 ** len(self.prefix))

    def reflect(self):
        """Expansion of ``1 - x``, canonicalized."""
        if self.exact:
            return DyadicExpansion.from_fraction(1 - self.to_fraction())
        return DyadicExpansion(tuple(1 - b for b in self.prefix), (), False)

    def __str__(self):
        if self.whole:
            return "1"
        s = "0." + "".join(map(str, self.prefix))
        if self.period:
            s += "(" + "".join(map(str, self.period)) + ")"
        elif not self.exact:
            s += "..."
        elif not self.prefix:
            s += "0"
        return s

    def require_canonical(self):
        if self.whole or not self.is_canonical:
            raise NonCanonicalExpansion(str(self))
        return self
