"""Command-line front end.

Exit codes: 0 smooth, 1 singular, 2 usage or domain error, 3 inconclusive.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import document
from .convex import canonical_rank1, fmt_q, format_canonical
from .downgrade import presentation_for
from .errors import AHError
from .lattice import IntMatrix
from .pdivisor import evaluate
from .poly import is_singular_point, jacobian_at, parse_point, parse_poly
from .smooth import (
    SmoothnessCertificate,
    Verdict,
    check_complexity1,
    check_gm_threefold,
    extract_local_data,
    match_local,
)

EXIT = {Verdict.SMOOTH: 0, Verdict.SINGULAR: 1, Verdict.INCONCLUSIVE: 3}
EXIT_ERROR = 2


def _tail_text(cone) -> str:
    if cone.is_zero():
        return "{0}"
    return "[0, +inf)" if cone.generators == ((1,),) else "(-inf, 0]"


def _matrix_text(m: IntMatrix) -> str:
    return "; ".join(" ".join(str(x) for x in r) for r in m.rows)


def cmd_downgrade(args) -> int:
    p = presentation_for(args.weights, args.section)
    wc = p.case
    print(f"case: {wc.case_id}")
    print(f"weights: {' '.join(map(str, wc.normalized))}")
    print(f"permutation: {' '.join(map(str, wc.permutation))}  sign: {wc.sign:+d}")
    print(f"section: {' '.join(map(str, p.section))}")
    params = f" {p.base.parameters}" if p.base.parameters else ""
    print(f"base: {p.base.kind}{params}")
    print(f"tail: {_tail_text(p.divisor.tail)}")
    coeffs = p.divisor.coefficients
    if not coeffs:
        print("D = 0")
    for ident, delta in coeffs.items():
        print(f"  {ident}: {format_canonical(canonical_rank1(delta))}")
    print(f"P: {_matrix_text(p.weights.P)}")
    print(f"cover_order: {p.cover_order}")
    if p.describes_cover:
        print(f"note: this p-divisor describes the cyclic cover of order {p.cover_order}, not A^3 itself")
    return 0


def _print_certificate(cert) -> None:
    for _, m in cert.results:
        print(m.summary())
    for n in cert.notes:
        print(f"note: {n}")
    print(f"verdict: {cert.verdict}")


def cmd_smooth(args) -> int:
    doc = document.load(args.input)
    if doc.base.is_curve:
        v = check_complexity1(doc.base, doc.divisor)
        print(f"verdict: {v}")
        return EXIT[v]
    cert = check_gm_threefold(doc.divisor, doc.resolved_strata(), args.bound)
    _print_certificate(cert)
    return EXIT[cert.verdict]


def cmd_match(args) -> int:
    doc = document.load(args.input)
    data = extract_local_data(doc.divisor, doc.resolved_strata())
    if args.stratum:
        data = [x for x in data if x.stratum.id in args.stratum]
        if not data:
            raise AHError(f"no stratum named {args.stratum}")
    results = []
    for x in data:
        print(f"{x.stratum.id}: entries [{', '.join(str(e) for e in x.entries)}] crossing {x.crossing}")
        results.append((x.stratum, match_local(x, args.bound)))
    cert = SmoothnessCertificate.aggregate(results)
    _print_certificate(cert)
    return EXIT[cert.verdict]


def cmd_eval(args) -> int:
    doc = document.load(args.input)
    w = evaluate(doc.divisor, args.u)
    print(", ".join(f"{ident}: {fmt_q(w[ident])}" for ident in doc.divisor.support))
    return 0


def cmd_oracle(args) -> int:
    variables = args.vars.split(",") if args.vars else None
    fs = [parse_poly(text, variables) for text in args.poly]
    point = parse_point(args.point)
    rows, rank = jacobian_at(fs, point)
    for f, row in zip(fs, rows):
        print(f"gradient of {f}: ({', '.join(fmt_q(x) for x in row)})")
    singular = is_singular_point(fs, point)
    print(f"rank: {rank}")
    print(f"verdict: {'singular point' if singular else 'smooth point'}")
    return 1 if singular else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ahsmooth", description="Polyhedral divisors and smoothness of Gm-threefolds")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("downgrade", help="presentation of a linear Gm-action on A^3")
    p.add_argument("weights", nargs=3, type=int)
    p.add_argument("--section", nargs=3, type=int)
    p.set_defaults(func=cmd_downgrade)

    for name, func, helptext in (
        ("smooth", cmd_smooth, "certify smoothness of a p-divisor document"),
        ("match", cmd_match, "show local germs and their matches"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input")
        p.add_argument("--bound", type=int, default=1000)
        if name == "match":
            p.add_argument("--stratum", action="append")
        p.set_defaults(func=func)

    p = sub.add_parser("eval", help="evaluation divisor D(u)")
    p.add_argument("input")
    p.add_argument("u", nargs="+", type=int)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("oracle", help="exact point checks on equations")
    osub = p.add_subparsers(dest="oracle", required=True)
    j = osub.add_parser("jacobian", help="Jacobian rank at a point")
    j.add_argument("--poly", action="append", required=True)
    j.add_argument("--point", required=True, help="comma separated rationals, e.g. 0,1,1,0")
    j.add_argument("--vars", help="comma separated variable names (default x,y,z,t)")
    j.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "bound", 1) < 1:
        parser.error("--bound must be positive")
    try:
        return args.func(args)
    except AHError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
