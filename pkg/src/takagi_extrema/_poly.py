"""Small exact helpers for integer polynomials.

Polynomials are tuples of coefficients ordered from the constant term up.
Exact gcd and Sturm root counting are delegated to sympy.
"""

from fractions import Fraction
from functools import lru_cache

import sympy

_X = sympy.Symbol("x")


def normalize(coeffs):
    """Integer tuple with trailing zeros removed (rationals are cleared)."""
    coeffs = [Fraction(c) for c in coeffs]
    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    out = [int(c * den) for c in coeffs]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def degree(p):
    return len(p) - 1


def eval_exact(p, x):
    """Horner evaluation with exact rational arithmetic."""
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def eval_mp(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sign_at_dyadic(p, num, k):
    """Sign of p(num / 2**k) using only integer arithmetic."""
    d = len(p) - 1
    acc = p[d]
    for j in range(d - 1, -1, -1):
        acc = acc * num + (p[j] << (k * (d - j)))
    return (acc > 0) - (acc < 0), acc


def derivative_bound(p, radius):
    """Upper bound of |p'| on the disc |x| <= radius."""
    r = Fraction(radius)
    total = Fraction(0)
    power = Fraction(1)
    for j in range(1, len(p)):
        total += j * abs(p[j]) * power
        power *= r
    return total


def scale_argument(p, r):
    """Coefficients of p(x / r), cleared to integers."""
    r = Fraction(r)
    d = len(p) - 1
    return normalize(
        [c * r.denominator**j * r.numerator ** (d - j) for j, c in enumerate(p)]
    )


def even_odd_square(p):
    """Polynomial whose roots are the squares of the roots of p."""
    even = list(p[0::2])
    odd = list(p[1::2])
    e2 = _mul(even, even)
    o2 = _mul(odd, odd)
    out = [0] * max(len(e2), len(o2) + 1)
    for i, c in enumerate(e2):
        out[i] += c
    for i, c in enumerate(o2):
        out[i + 1] -= c
    return normalize(out)


def _mul(a, b):
    if not a or not b:
        return [0]
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def mul(a, b):
    return normalize(_mul(list(a), list(b)))


def _to_sympy(p):
    return sympy.Poly(list(reversed(p)), _X, domain="QQ")


@lru_cache(maxsize=4096)
def gcd(p, q):
    g = sympy.gcd(_to_sympy(p), _to_sympy(q))
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(g.all_coeffs())]
    return normalize(coeffs)


@lru_cache(maxsize=4096)
def count_roots(p, lo, hi):
    """Number of distinct real roots of p in the closed interval [lo, hi]."""
    return int(_to_sympy(p).count_roots(sympy.Rational(lo.numerator, lo.denominator),
                                        sympy.Rational(hi.numerator, hi.denominator)))


@lru_cache(maxsize=1024)
def squarefree(p):
    """p divided by gcd(p, p'); same real roots, all simple."""
    part = _to_sympy(p).sqf_part()
    return normalize([Fraction(int(c.p), int(c.q)) for c in reversed(part.all_coeffs())])


def cancel(num, den):
    """Reduce num/den to lowest terms, scaled jointly so that den(0) = 1.

    Returns Fraction coefficient lists.
    """
    g = gcd(normalize(num), normalize(den))
    n = _to_sympy(normalize(num)).exquo(_to_sympy(g))
    d = _to_sympy(normalize(den)).exquo(_to_sympy(g))
    n = [Fraction(int(c.p), int(c.q)) for c in reversed(n.all_coeffs())]
    d = [Fraction(int(c.p), int(c.q)) for c in reversed(d.all_coeffs())]
    # num and den were normalised independently above
    ratio = _leading_ratio(num, den)
    n = [c * ratio for c in n]
    c0 = d[0]
    return [c / c0 for c in n], [c / c0 for c in d]


def _leading_ratio(num, den):
    """Factor lost when num and den were normalised independently."""
    num = [Fraction(c) for c in num]
    den = [Fraction(c) for c in den]
    nn = normalize(num)
    nd = normalize(den)
    i = next(k for k, c in enumerate(num) if c)
    j = next(k for k, c in enumerate(den) if c)
    return (num[i] / nn[i]) / (den[j] / nd[j])
