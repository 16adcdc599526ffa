"""Command-line interface.

Usage:
    takagi-extrema extremum --v 1/2 --kind max
    takagi-extrema extremum --v "1/(2*sqrt(2))" --kind max --json
    takagi-extrema extremum --v 0.3 --kind max --verify
    takagi-extrema consistent --w 2/3 --len 25
    takagi-extrema inverse --x 317/768
    takagi-extrema chi --digits 16
    takagi-extrema sweep --from 0.26 --to 0.49 --steps 24 --kind max --csv out.csv

Reals are accepted as integers, ``p/q``, decimals (read at ``--precision``
bits) or radical expressions built from ``sqrt`` and ``root(a, n)``.

Exit codes: 0 success, 1 failed ``--verify``, 2 invalid input,
3 ambiguous sign (retry with a larger ``--precision``), 4 inverse found no
admissible root (NoRoot or RootNotIntermediate).
"""

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import mpmath

from .consistency import Mode, consistent_function
from .dyadic import DyadicExpansion
from .errors import InvalidParameter, SignAmbiguous, TakagiError
from .extrema import global_extremum
from .inverse import Status, inverse
from .oracle import grid_extremum
from .realpoint import DEFAULT_PRECISION, Rational, from_expression
from .selfsimilar import chi, chi_product

__all__ = ["main", "build_parser", "report_to_dict", "REPORT_SCHEMA", "CSV_FIELDS"]

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_AMBIGUOUS, EXIT_NOROOT = 0, 1, 2, 3, 4

CSV_FIELDS = ["v", "kind", "branch", "value", "value_err", "set_kind", "inf", "sup", "dim"]

_NUM = {"type": "string"}
_NUM_OR_NULL = {"type": ["string", "null"]}

#: JSON schema of ``extremum --json`` (and of each sweep row in JSON mode).
REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ExtremumReport",
    "type": "object",
    "required": CSV_FIELDS + ["exact", "points", "value_float"],
    "properties": {
        "v": _NUM,
        "kind": {"enum": ["max", "min"]},
        "branch": {"type": "string"},
        "value": _NUM,
        "value_float": {"type": "number"},
        "value_err": _NUM,
        "set_kind": {"enum": ["TwoPoints", "OnePoint", "FourPoints", "BlockCantor",
                              "ShiftedMinSet"]},
        "inf": _NUM,
        "sup": _NUM,
        "dim": _NUM,
        "exact": {"type": "boolean"},
        "points": {"type": ["array", "null"], "items": _NUM},
        "points_err": _NUM_OR_NULL,
        "block": _NUM_OR_NULL,
        "complement": _NUM_OR_NULL,
        "N": {"type": ["integer", "null"]},
        "band": {"type": ["integer", "null"]},
        "verified": {"type": ["boolean", "null"]},
        "oracle_value": {"type": ["number", "null"]},
    },
    "additionalProperties": False,
}


def fmt(x, digits=20):
    """Exact text for rationals, ``digits`` significant digits otherwise."""
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Rational):
        return str(x.value)
    if hasattr(x, "to_mpf"):
        return mpmath.nstr(x.to_mpf(), digits)
    return mpmath.nstr(mpmath.mpf(x), digits)


def _mpq(q):
    return mpmath.mpf(q.numerator) / q.denominator


def _err_text(e):
    if isinstance(e, Fraction) and e == 0:
        return "0"
    return mpmath.nstr(_mpq(e) if isinstance(e, Fraction) else mpmath.mpf(e), 3)


def report_to_dict(rep, verified=None, oracle_value=None):
    """Plain-JSON view of an ExtremumReport (see :data:`REPORT_SCHEMA`)."""
    s = rep.set
    pts = rep.points()
    # midpoints of digit ranges are not meaningful as exact fractions
    pt = fmt if not getattr(s, "err", 0) else (lambda q: fmt(_mpq(q)))
    out = {
        "v": fmt(rep.v),
        "kind": rep.kind.name.lower(),
        "branch": str(rep.branch),
        "value": fmt(rep.value),
        "value_float": float(rep.value),
        "value_err": _err_text(rep.value_err),
        "set_kind": s.set_kind,
        "inf": pt(s.inf),
        "sup": pt(s.sup),
        "dim": fmt(Fraction(s.dim)),
        "exact": bool(rep.exact),
        "points": None if pts is None else [pt(p) for p in pts],
        "points_err": None if not getattr(s, "err", 0) else _err_text(s.err),
        "block": getattr(s, "block", None),
        "complement": getattr(s, "complement", None),
        "N": rep.N,
        "band": rep.band,
        "verified": verified,
        "oracle_value": oracle_value,
    }
    if s.set_kind == "ShiftedMinSet":
        out["block"] = getattr(s.reference, "block", None)
        out["complement"] = getattr(s.reference, "complement", None)
    return out


def _text_report(d):
    lines = [
        f"v          = {d['v']}",
        f"kind       = {d['kind']}",
        f"branch     = {d['branch']}",
        f"value      = {d['value']}" + ("" if d["value_err"] == "0" else f"  (+- {d['value_err']})"),
        f"set        = {d['set_kind']}, dim {d['dim']}",
    ]
    if d["points"] is not None:
        err = f"  (+- {d['points_err']})" if d["points_err"] else ""
        lines.append(f"points     = {', '.join(d['points'])}{err}")
    if d["block"] is not None:
        lines.append(f"blocks     = {d['block']} / {d['complement']}")
    lines.append(f"inf, sup   = {d['inf']}, {d['sup']}")
    if d["N"] is not None:
        lines.append(f"N          = {d['N']}")
    if d["band"] is not None:
        lines.append(f"band k     = {d['band']}")
    if d["verified"] is not None:
        lines.append(f"verified   = {d['verified']} (oracle {d['oracle_value']:.15g})")
    return "\n".join(lines)


def _csv_text(rows):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, extrasaction="ignore",
                            lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r)
    return buf.getvalue()


def _parse_real(text, prec):
    try:
        return from_expression(text, prec)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameter(str(exc)) from exc


# commands


def cmd_extremum(args):
    v = _parse_real(args.v, args.precision)
    rep = global_extremum(v, args.kind, tol=args.tol, prec=args.precision)
    verified = oracle_value = None
    if args.verify:
        res = grid_extremum(float(v), args.kind, grid_size=2**18, refine_rounds=3)
        oracle_value = float(res.value)
        verified = abs(oracle_value - float(rep.value)) <= max(1e-9, 10 * float(args.tol))
    d = report_to_dict(rep, verified, oracle_value)
    if args.json:
        print(json.dumps(d, indent=2))
    elif args.csv:
        sys.stdout.write(_csv_text([d]))
    else:
        print(_text_report(d))
    return EXIT_VERIFY if verified is False else EXIT_OK


def cmd_consistent(args):
    w = _parse_real(args.w, args.precision)
    mode = Mode.ANTI if args.anti else Mode.CONSISTENT
    res = consistent_function(w, mode, max_len=max(args.len, 2))
    F = res.func
    n = F.available(args.len)
    tag = repr(F.closed_form) if F.closed_form is not None else None
    d = {
        "w": fmt(w),
        "mode": mode.name.lower(),
        "terminated": res.terminated,
        "degree": F.degree if res.terminated else None,
        "signs": F.signs(n) if not res.terminated else F.signs(),
        "coefficients": list(F.prefix(n)),
        "closed_form": tag,
        "formula": F.closed_form.formula() if F.closed_form is not None else None,
        "source": res.source,
    }
    if args.json:
        print(json.dumps(d, indent=2))
        return EXIT_OK
    print(f"w        = {d['w']} ({d['mode']})")
    print(f"signs    = {d['signs']}")
    print(f"series   = {F.to_str(n)}")
    kind = f"polynomial of degree {d['degree']}" if res.terminated else "series"
    print(f"type     = {kind}")
    if tag:
        print(f"closed   = {tag}: {d['formula']}")
    print(f"source   = {d['source']}")
    return EXIT_OK


def cmd_inverse(args):
    x = args.x.strip()
    if "/" not in x and not x.startswith("0.") and x not in ("0", "1"):
        raise InvalidParameter(f"expected p/q or binary digits 0.xxx, got {x!r}")
    try:
        arg = DyadicExpansion.parse(x)
    except ValueError as exc:
        raise InvalidParameter(str(exc)) from exc
    out = inverse(arg, check_len=args.check_len)
    d = {
        "x": x,
        "status": str(out.status),
        "v": fmt(out.v) if out.v is not None else None,
        "w": fmt(out.w) if out.w is not None else None,
        "v_exact": repr(out.v) if out.v is not None else None,
        "series": out.F.signs(min(out.F.materialized, 40)) if out.F is not None else None,
        "closed_form": (out.F.closed_form.formula()
                        if out.F is not None and out.F.closed_form is not None else None),
        "roots": [fmt(r) for r in out.roots],
        "approximate": out.approximate,
        "complete": out.complete,
    }
    if args.json:
        print(json.dumps(d, indent=2))
    else:
        print(f"status   = {d['status']}")
        if d["closed_form"]:
            print(f"F(x)     = {d['closed_form']}")
        if d["series"]:
            print(f"signs    = {d['series']}")
        print(f"roots    = {', '.join(d['roots']) or 'none'} (F' < 0 in (1/2, 1))")
        if out.found:
            print(f"v        = {d['v']}  [{d['v_exact']}]")
            print(f"w = 2v   = {d['w']}")
        if out.approximate:
            print(f"note     = from {out.digits_used} digits, v is approximate")
        if not out.complete:
            print("note     = some roots have even multiplicity and were skipped")
    return EXIT_OK if out.status is Status.FOUND else EXIT_NOROOT


def cmd_chi(args):
    if args.digits < 1:
        raise InvalidParameter("--digits must be positive")
    value, digits = chi(args.digits)
    ndig = max(15, int(args.digits * 0.30103))
    prod = chi_product(max(8, args.digits.bit_length() + 2), prec=args.digits + 64)
    if args.json:
        print(json.dumps({"digits": digits, "value": mpmath.nstr(value, ndig),
                          "product": mpmath.nstr(prod, ndig)}, indent=2))
    else:
        print(f"digits   = {digits}")
        print(f"value    = {mpmath.nstr(value, ndig)}  (truncated, error < 2^-{args.digits})")
        print(f"product  = {mpmath.nstr(prod, ndig)}")
    return EXIT_OK


def _sweep_row(job):
    v_text, kind, tol, prec = job
    try:
        rep = global_extremum(from_expression(v_text, prec), kind, tol=tol, prec=prec)
        return report_to_dict(rep)
    except SignAmbiguous as exc:
        return {"v": v_text, "kind": kind, "branch": "SignAmbiguous", "value": "",
                "value_err": "", "set_kind": "", "inf": "", "sup": "", "dim": "",
                "error": str(exc)}


def sweep_values(start, stop, steps):
    """``steps`` equally spaced values from ``start`` to ``stop`` inclusive.

    Rational endpoints give rational values (as ``p/q`` strings).
    """
    if steps < 1:
        raise InvalidParameter("--steps must be positive")
    a, b = (_parse_real(t, DEFAULT_PRECISION) for t in (start, stop))
    if isinstance(a, Rational) and isinstance(b, Rational):
        a, b = a.value, b.value
        if steps == 1:
            return [str(a)]
        return [str(a + (b - a) * i / (steps - 1)) for i in range(steps)]
    fa, fb = float(a), float(b)
    if steps == 1:
        return [repr(fa)]
    return [repr(fa + (fb - fa) * i / (steps - 1)) for i in range(steps)]


def cmd_sweep(args):
    vals = sweep_values(args.start, args.stop, args.steps)
    for t in vals:
        v = _parse_real(t, args.precision)
        if not (v.compare(-1) > 0 and v.compare(1) < 0):
            raise InvalidParameter(f"v must lie in (-1, 1), got {t}")
    jobs = [(t, args.kind, args.tol, args.precision) for t in vals]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(j) for j in jobs]
    if args.json:
        text = json.dumps(rows, indent=2) + "\n"
    else:
        text = _csv_text(rows)
    target = args.csv or args.out
    if target and target != "-":
        with open(target, "w", newline="") as fh:
            fh.write(text)
        print(f"wrote {len(rows)} rows to {target}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="takagi-extrema",
                                description="Global extrema of the exponential Takagi class.")
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                   help="working precision in bits for non-rational reals (default 200)")
    sub = p.add_subparsers(dest="command", required=True)

    def prec_flag(sp):
        sp.add_argument("--precision", type=int, default=argparse.SUPPRESS,
                        help="working precision in bits")

    e = sub.add_parser("extremum", help="global max or min of T_v")
    e.add_argument("--v", required=True, help="parameter in (-1, 1)")
    e.add_argument("--kind", choices=["max", "min"], default="max")
    e.add_argument("--tol", type=float, default=1e-12)
    fmt_group = e.add_mutually_exclusive_group()
    fmt_group.add_argument("--json", action="store_true")
    fmt_group.add_argument("--csv", action="store_true")
    e.add_argument("--verify", action="store_true", help="cross-check with the grid oracle")
    prec_flag(e)
    e.set_defaults(func=cmd_extremum)

    c = sub.add_parser("consistent", help="consistent sign sequence of w")
    c.add_argument("--w", required=True)
    c.add_argument("--anti", action="store_true", help="anti-consistent instead")
    c.add_argument("--len", type=int, default=32, help="coefficients to print")
    c.add_argument("--json", action="store_true")
    prec_flag(c)
    c.set_defaults(func=cmd_consistent)

    i = sub.add_parser("inverse", help="recover v from a maximum point")
    i.add_argument("--x", required=True, help="p/q or binary digits like 0.01(10)")
    i.add_argument("--check-len", type=int, default=128)
    i.add_argument("--json", action="store_true")
    i.set_defaults(func=cmd_inverse)

    h = sub.add_parser("chi", help="digits and value of chi")
    h.add_argument("--digits", type=int, default=64)
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=cmd_chi)

    s = sub.add_parser("sweep", help="extrema over a range of v")
    s.add_argument("--from", dest="start", required=True)
    s.add_argument("--to", dest="stop", required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--kind", choices=["max", "min"], default="max")
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--csv", metavar="PATH", help="write CSV here ('-' for stdout)")
    s.add_argument("--out", metavar="PATH", help="alias of --csv (also for --json)")
    s.add_argument("--json", action="store_true", help="JSON array instead of CSV")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    prec_flag(s)
    s.set_defaults(func=cmd_sweep)
    return p


_VALUE_FLAGS = ("--v", "--w", "--x", "--from", "--to")


def _join_negative_values(argv):
    """Let ``--v -7/10`` through: argparse would read ``-7/10`` as a flag."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_values(argv))
    try:
        return args.func(args)
    except SignAmbiguous as exc:
        print(f"error: {exc}. Retry with a larger --precision (now {args.precision} bits) "
              "or give v exactly as p/q.", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except (InvalidParameter, TakagiError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
