"""The constant chi, the digit-doubling map H and the transport of maximum sets.

chi has binary digits x_1 = 0, x_{2k} = 1 - x_k, x_{2k+1} = x_{k+1}
(the Thue-Morse word with a shifted index), so
chi = 0.0110100110010110..._2 = 0.412454033...

H replaces each binary digit 0 by 01 and 1 by 10. It maps rationals to
rationals, is strictly increasing, and its iterates pull every point of
[0, 1/2) towards chi and every point of [1/2, 1) towards 1 - chi.
"""

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .dyadic import DyadicExpansion
from .errors import InvalidParameter
from .extrema import global_extremum
from .realpoint import DEFAULT_PRECISION, as_point, nth_root

__all__ = [
    "chi_digits",
    "chi",
    "chi_product",
    "h_map",
    "h_iterate",
    "TransportResult",
    "transport_Ev",
]

_DOUBLE = {0: (0, 1), 1: (1, 0)}


def chi_digits(L):
    """First ``L`` digits x_1..x_L of chi as a '0'/'1' string."""
    if L < 1:
        raise InvalidParameter("need at least one digit")
    x = [0] * (L + 1)  # 1-based
    for i in range(2, L + 1):
        x[i] = 1 - x[i // 2] if i % 2 == 0 else x[i // 2 + 1]
    return "".join(map(str, x[1:]))


def chi(precision_digits=64, prec=DEFAULT_PRECISION):
    """chi from its first L digits.

    Returns:
        ``(value, digits)``; value is the truncation sum x_i 2^-i (an mpmath
        number), within 2^-L below chi.
    """
    digits = chi_digits(precision_digits)
    q = Fraction(int(digits, 2), 2 ** len(digits))
    with mpmath.workprec(max(prec, precision_digits + 16)):
        value = mpmath.mpf(q.numerator) / q.denominator
    return value, digits


def chi_product(terms=40, prec=DEFAULT_PRECISION):
    """1/2 - 1/4 prod_{n=0}^{terms} (1 - 2^(-2^n))."""
    with mpmath.workprec(prec):
        p = mpmath.mpf(1)
        for n in range(terms + 1):
            p *= 1 - mpmath.ldexp(1, -(2**n))
        return mpmath.mpf(1) / 2 - p / 4


def _double(bits):
    out = []
    for b in bits:
        out.extend(_DOUBLE[b])
    return tuple(out)


def h_map(x):
    """Replace every digit 0 by 01 and 1 by 10.

    Args:
        x: DyadicExpansion (or a rational in [0, 1)) in canonical form.
            A terminating expansion continues with zeros, which map to (01).

    Raises:
        NonCanonicalExpansion: ``x`` ends in repeating ones or equals 1.
    """
    if not isinstance(x, DyadicExpansion):
        x = DyadicExpansion.from_fraction(Fraction(x))
    x.require_canonical()
    if not x.exact:
        return DyadicExpansion(_double(x.prefix), (), False)
    period = x.period or (0,)
    return DyadicExpansion(_double(x.prefix), _double(period))


def h_iterate(x, n):
    """``n``-fold H; a truncated input of L digits yields 2^n L digits."""
    if not isinstance(x, DyadicExpansion):
        x = DyadicExpansion.from_fraction(Fraction(x))
    for _ in range(n):
        x = h_map(x)
    return x


@dataclass
class TransportResult:
    """E_v compared with H(E_{2v^2}).

    Attributes:
        relation: ``"equal"``, ``"proper_subset"`` (every image point lies in
            E_v but not conversely) or ``"mismatch"``.
        max_err: Largest distance from an image point to its partner in E_v.
    """

    v: object
    source: list
    image: list
    target: list
    relation: str
    max_err: object


def _set_points(report):
    pts = report.points()
    if pts is None:
        raise InvalidParameter(f"{report.set.set_kind} sets are not enumerable")
    err = getattr(report.set, "err", 0)
    digits = getattr(report.set, "digits", None)
    out = []
    for p in pts:
        if digits is not None and p == report.set.x_minus:
            out.append(digits)
        elif digits is not None and p == report.set.x_plus:
            out.append(digits.reflect())
        else:
            out.append(DyadicExpansion.from_fraction(p))
    return out, Fraction(err)


def transport_Ev(v, tol=1e-12, check_tol=1e-9, allow_boundary=False):
    """Check E_v = H(E_{2v^2}) for v in (1/(2 sqrt 2), 1/2).

    Both maximum sets are computed independently by
    :func:`~takagi_extrema.extrema.global_extremum`.

    Args:
        v: Parameter.
        check_tol: Allowed distance between matching points.
        allow_boundary: Accept v = 1/(2 sqrt 2), where only inclusion holds.
    """
    v = as_point(v)
    lower = nth_root(Fraction(1, 8), 2)
    c = v.compare(lower)
    if v.compare(Fraction(1, 2)) >= 0 or c < 0 or (c == 0 and not allow_boundary):
        raise InvalidParameter("transport needs v in (1/(2 sqrt 2), 1/2)")
    u = v.square().scale(2)
    src_report = global_extremum(u, "max", tol)
    dst_report = global_extremum(v, "max", tol)
    src, src_err = _set_points(src_report)
    dst, dst_err = _set_points(dst_report)
    image = [h_map(p) for p in src]
    img_vals = [p.to_fraction() for p in image]
    dst_vals = [p.to_fraction() for p in dst]
    # H at most halves distances between nearby points sharing a prefix
    slack = Fraction(check_tol) + src_err + dst_err

    def nearest(x):
        return min(abs(x - y) for y in dst_vals)

    errs = [nearest(x) for x in img_vals]
    inside = all(e <= slack for e in errs)
    covered = all(min(abs(y - x) for x in img_vals) <= slack for y in dst_vals)
    relation = "equal" if inside and covered else ("proper_subset" if inside else "mismatch")
    return TransportResult(v, [p.to_fraction() for p in src], img_vals, dst_vals, relation,
                           max(errs))
