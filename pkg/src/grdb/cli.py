"""``grdb`` command line: search, porb, format, invariants, verify, kernels.

Exit codes: 0 success, 1 usage, 2 verification diff, 3 internal inconsistency.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from .formats import FAMILIES, FormatError, ci_format, gr25_format, ogr510_format, parse_w, product_format
from .invariants import InvariantError, Kc2, compute_invariants, fraction_str, plurigenera
from .orbifold import SINGULARITY_CLASSES, QuotientSingularity, porb_generic, singularity_types
from .pipeline import run_search
from .records import dumps_csv, dumps_jsonl, read_jsonl, record_to_dict
from .reference import TABLES, verify_tables
from .search import Basket, SearchConfig, candidate_singularities, find_kernels, hilbert_series
from .series import expand, format_poly

EXIT_OK, EXIT_USAGE, EXIT_DIFF, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, indent=1)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _format_from_args(args):
    fam = args.family
    if fam == "ci":
        if not args.degrees:
            raise UsageError("--degrees is required for complete intersections")
        return ci_format(args.degrees)
    if args.w is None:
        raise UsageError("--w is required for this family")
    w2 = parse_w(args.w)
    if fam == "gr25":
        return gr25_format(w2)
    if fam == "gr25xh":
        if not args.degrees:
            raise UsageError("--degrees is required for hypersurface sections")
        return product_format(gr25_format(w2), args.degrees)
    if fam == "ogr510":
        if args.u is None:
            raise UsageError("--u is required for OGr(5,10)")
        return ogr510_format(args.u, w2)
    raise UsageError(f"unknown family {fam!r}")


def cmd_search(args) -> int:
    config = SearchConfig(family=args.family, dim=args.dim, k=args.k, max_adjunction=args.max_adjunction,
                          min_adjunction=args.min_adjunction, codim=args.codim, ci_degrees=args.ci_degrees,
                          hypersurfaces=args.hypersurfaces, sing_class=args.sing_class,
                          basket_cap=args.basket_cap, kernel_cap=args.kernel_cap, min_weight=args.min_weight,
                          jobs=args.jobs)
    records, report = run_search(config)
    rows = [record_to_dict(r) for r in records]
    text = dumps_csv(rows) if args.format == "csv" else dumps_jsonl(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    summary = json.dumps(report.as_dict(), sort_keys=True)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(summary + "\n")
    print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_porb(args) -> int:
    s = QuotientSingularity(args.r, args.weights)
    c = porb_generic(s, args.k)
    out = {
        "singularity": str(s),
        "k": args.k,
        "numerator": format_poly(c.inverse_numerator),
        "coefficients": list(c.inverse_numerator.coeffs),
        "window": list(c.window),
        "denominator": f"(1-t)^3(1-t^{s.r})",
    }
    if args.order:
        out["expansion"] = list(expand(c.series, args.order).coefficients)
    _emit(out)
    return EXIT_OK


def cmd_format(args) -> int:
    f = _format_from_args(args)
    _emit({
        "family": f.family,
        "codim": f.codim,
        "equation_degrees": ",".join(map(str, f.equation_degrees)),
        "adjunction": f.adjunction,
        "key_weights": list(f.key_weights),
        "numerator": format_poly(f.numerator),
        "coefficients": list(f.numerator.coeffs),
    })
    return EXIT_OK


def cmd_invariants(args) -> int:
    basket = Basket.parse(args.basket or "")
    if args.weights:
        f = _format_from_args(args)
        inv = compute_invariants(hilbert_series(f, args.weights), basket, args.k, args.m_max)
        out = inv.as_dict()
    else:
        if args.chi is None:
            raise UsageError("give --chi, or a format with --weights")
        out = {"chi": args.chi, "Kc2": fraction_str(Kc2(basket.points, args.chi))}
        if args.K3 is not None:
            out["K3"] = fraction_str(Fraction(args.K3))
            out["plurigenera"] = plurigenera(args.chi, Fraction(args.K3), basket.points, args.m_max)
    out["basket"] = basket.strings()
    _emit(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.results) as fh:
            rows = read_jsonl(fh)
    except OSError as e:
        raise UsageError(str(e))
    report = verify_tables(rows, args.table)
    print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_DIFF


def cmd_kernels(args) -> int:
    if args.weights:
        cands = candidate_singularities(args.weights, args.sing_class, args.k)
    else:
        cands = [s for r in range(2, args.max_index + 1) for s in singularity_types(r, args.k, args.sing_class)]
    kernels = find_kernels(cands, args.k, args.cap)
    _emit({"k": args.k, "candidates": len(cands), "kernels": [b.strings() for b in kernels]})
    return EXIT_OK


def _format_args(p) -> None:
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--w", help="grading, e.g. 0,1,1,1,1 or 1/2(1,1,1,3,3)")
    p.add_argument("--u", type=int)
    p.add_argument("--degrees", type=_ints, help="equation or hypersurface degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="grdb", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("search", help="enumerate candidates")
    p.add_argument("--family", choices=FAMILIES, default="gr25")
    p.add_argument("--ci-degrees", type=_ints, default=None)
    p.add_argument("--codim", type=int)
    p.add_argument("--hypersurfaces", type=int, default=1)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--max-adjunction", type=int, default=40)
    p.add_argument("--min-adjunction", type=int, default=1)
    p.add_argument("--sing-class", choices=SINGULARITY_CLASSES, default="terminal")
    p.add_argument("--basket-cap", type=int, default=12)
    p.add_argument("--kernel-cap", type=int, default=12)
    p.add_argument("--min-weight", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--report", help="write the run report here as well as to stderr")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seedless", action="store_true", help="accepted for compatibility; nothing is random")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("porb", help="orbifold contribution of one point")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--weights", type=_ints, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--order", type=int, default=0, help="also print the expansion to this degree")
    p.set_defaults(func=cmd_porb)

    p = sub.add_parser("format", help="numerator and degrees of a format")
    _format_args(p)
    p.set_defaults(func=cmd_format)

    p = sub.add_parser("invariants", help="chi, K^3, K.c2 and plurigenera")
    p.add_argument("--basket", default="")
    p.add_argument("--chi", type=int)
    p.add_argument("--K3")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--m-max", type=int, default=12)
    p.add_argument("--weights", type=_ints, help="ambient weights; the format flags are then required")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--w")
    p.add_argument("--u", type=int)
    p.add_argument("--degrees", type=_ints)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("verify", help="compare search output with a reference table")
    p.add_argument("--table", choices=sorted(TABLES), required=True)
    p.add_argument("--results", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kernels", help="minimal cancelling multisets of singularities")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--sing-class", choices=SINGULARITY_CLASSES, default="canonical-isolated")
    p.add_argument("--max-index", type=int, default=6)
    p.add_argument("--weights", type=_ints, help="use the candidates of these ambient weights instead")
    p.add_argument("--cap", type=int, default=12)
    p.set_defaults(func=cmd_kernels)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InvariantError as e:
        print(f"grdb: internal inconsistency: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UsageError, FormatError, ValueError, KeyError) as e:
        print(f"grdb: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
