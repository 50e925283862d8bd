"""Command-line interface.

Exit codes: 0 success; 1 a verify check failed; 2 unreadable or malformed
input; 3 the input is well formed but unsuitable (wrong arity or parity,
too few points); 4 the two conversion routes disagree.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import __version__
from .analysis import (
    NotAnalyzable,
    NotConvergent,
    degree_of_precision,
    holder_regularity,
    pair_to_dict,
    precision_to_dict,
    regularity_pair_report,
    regularity_to_dict,
)
from .catalog import PAIRS, CatalogError, UnknownScheme, default_catalog
from .conversion import ConversionError, convert, convert_via_symbol, expand_rule_text
from .numeric import format_rational
from .refinement import PolygonFormatError, TooFewPoints, format_polygon, load_polygon, refine
from .scheme import MaskFormatError, SubdivisionScheme, dumps_mask, load_mask
from .svg import render, scene_for_trace
from .verify import GROUPS, run_verify

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_UNSUITABLE = 3
EXIT_MISMATCH = 4


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


def _scheme_source(p: argparse.ArgumentParser, mask_flag: str = "--mask") -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--scheme", metavar="NAME", help="catalog scheme name")
    g.add_argument(mask_flag, dest="mask", metavar="FILE", help="mask JSON file")


def _format_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "text"), default="text")


def _topology_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--closed", dest="topology", action="store_const", const="closed",
                   help="treat the polygon as closed, overriding its header")
    g.add_argument("--open", dest="topology", action="store_const", const="open",
                   help="treat the polygon as open, overriding its header")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subdivkit",
        description="Exact binary/quaternary subdivision: conversion, refinement and analysis.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="derive the quaternary scheme of a dual binary scheme")
    _scheme_source(p, "--in")
    p.add_argument("--out", metavar="FILE", help="write the quaternary mask JSON here")
    p.add_argument("--method", choices=("theorem", "symbol", "both"), default="both")
    _format_flag(p)

    p = sub.add_parser("refine", help="refine a polygon CSV for a number of steps")
    _scheme_source(p)
    p.add_argument("--in", dest="polygon", required=True, metavar="FILE", help="polygon CSV")
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--out", metavar="FILE", help="write the final polygon CSV here")
    _topology_flags(p)
    _format_flag(p)

    p = sub.add_parser("holder", help="Hölder regularity bounds")
    _scheme_source(p)
    p.add_argument("--pair", action="store_true", help="also convert and compare the quaternary scheme")
    p.add_argument("--depth", type=int, default=1, help="length of matrix products (default 1)")
    _format_flag(p)

    p = sub.add_parser("precision", help="degrees of polynomial precision and generation")
    _scheme_source(p)
    p.add_argument("--max-degree", type=int, default=16)
    _format_flag(p)

    p = sub.add_parser("catalog", help="list built-in and extra schemes")
    _format_flag(p)

    p = sub.add_parser("verify", help="regress the catalog against reference values")
    p.add_argument("--only", choices=GROUPS, action="append", help="restrict to a check group")
    _format_flag(p)

    p = sub.add_parser("plot", help="write an SVG of a polygon and its refinements")
    _scheme_source(p)
    p.add_argument("--in", dest="polygon", required=True, metavar="FILE", help="polygon CSV")
    p.add_argument("--steps", type=int, default=2)
    p.add_argument("--out", required=True, metavar="FILE", help="SVG output path")
    _topology_flags(p)
    return parser


def _load_scheme(args: argparse.Namespace) -> SubdivisionScheme:
    if args.scheme is not None:
        try:
            return default_catalog()[args.scheme]
        except (UnknownScheme, CatalogError) as exc:
            raise CliError(str(exc), EXIT_INPUT) from exc
    try:
        return load_mask(args.mask)
    except OSError as exc:
        raise CliError(f"cannot read {args.mask}: {exc.strerror or exc}", EXIT_INPUT) from exc
    except MaskFormatError as exc:
        raise CliError(f"{args.mask}: {exc}", EXIT_INPUT) from exc


def _load_polygon(args: argparse.Namespace):
    try:
        poly = load_polygon(args.polygon)
    except OSError as exc:
        raise CliError(f"cannot read {args.polygon}: {exc.strerror or exc}", EXIT_INPUT) from exc
    except PolygonFormatError as exc:
        raise CliError(f"{args.polygon}: {exc}", EXIT_INPUT) from exc
    if args.topology is not None and args.topology != poly.topology:
        try:
            poly = type(poly)(poly.points, args.topology == "closed")
        except ValueError as exc:
            raise CliError(str(exc), EXIT_INPUT) from exc
    return poly


def _refine(args: argparse.Namespace):
    if args.steps < 0:
        raise CliError("--steps must be non-negative", EXIT_INPUT)
    scheme = _load_scheme(args)
    poly = _load_polygon(args)
    try:
        return refine(poly, scheme, args.steps)
    except TooFewPoints as exc:
        raise CliError(f"TooFewPoints: {exc}", EXIT_UNSUITABLE) from exc


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}", EXIT_INPUT) from exc


def _emit(args: argparse.Namespace, doc: Any, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_convert(args: argparse.Namespace) -> int:
    binary = _load_scheme(args)
    try:
        if args.method == "symbol":
            quat = convert_via_symbol(binary)
            listing = expand_rule_text(quat)
            widths = [st.width for st in listing.rules]
        else:
            result = convert(binary)
            quat = result.quaternary
            listing = expand_rule_text(result)
            widths = list(result.rule_widths)
            if args.method == "both":
                oracle = convert_via_symbol(binary)
                if oracle.mask != quat.mask:
                    print("error: closed-form and symbol-product masks differ", file=sys.stderr)
                    return EXIT_MISMATCH
    except ConversionError as exc:
        raise CliError(f"{type(exc).__name__}: {exc}", EXIT_UNSUITABLE) from exc
    if args.out is not None:
        _write(args.out, dumps_mask(quat))
    doc = {
        "name": quat.name,
        "method": args.method,
        "rule_widths": widths,
        "rules": listing.lines(),
        "mask": json.loads(dumps_mask(quat)),
    }
    text = f"{quat.name} (rule widths {', '.join(map(str, widths))})\n{listing}\n"
    if args.out is None and args.format == "text":
        text += dumps_mask(quat)
    _emit(args, doc, text)
    return EXIT_OK


def cmd_refine(args: argparse.Namespace) -> int:
    trace = _refine(args)
    final = trace.final
    if args.out is not None:
        _write(args.out, format_polygon(final))
        if args.format == "text":
            print(f"{len(trace.levels[0])} -> {len(final)} points after {trace.steps} step(s)")
            return EXIT_OK
    if args.format == "json":
        doc = {
            "scheme": trace.scheme.name,
            "levels": [
                {"topology": lvl.topology, "points": [[format_rational(x) for x in p] for p in lvl.points]}
                for lvl in trace.levels
            ],
        }
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    elif args.out is None:
        sys.stdout.write(format_polygon(final))
    return EXIT_OK


def _regularity_text(name: str, rep) -> str:
    return (
        f"{name}: arity {rep.arity}, smoothing order {rep.order}, "
        f"remainder span {len(rep.remainder_coeffs) - 1}\n"
        f"  xi in [{rep.xi_lower:.12g}, {rep.xi_upper:.12g}], mid {rep.xi_mid:.12g}\n"
        f"  r_lower {rep.r_lower:.12g}  r_mid {rep.r_mid:.12g}  r_upper {rep.r_upper:.12g}"
    )


def cmd_holder(args: argparse.Namespace) -> int:
    scheme = _load_scheme(args)
    if args.depth < 1:
        raise CliError("--depth must be at least 1", EXIT_INPUT)
    try:
        if args.pair:
            pair = regularity_pair_report(scheme, args.depth)
            text = "\n".join(
                [
                    _regularity_text(scheme.name, pair.binary),
                    _regularity_text(pair.conversion.quaternary.name, pair.quaternary),
                    f"delta r_mid {pair.delta_mid:+.12g}",
                ]
            )
            _emit(args, {"scheme": scheme.name, **pair_to_dict(pair)}, text)
        else:
            rep = holder_regularity(scheme, args.depth)
            _emit(args, {"scheme": scheme.name, **regularity_to_dict(rep)}, _regularity_text(scheme.name, rep))
    except ConversionError as exc:
        raise CliError(f"{type(exc).__name__}: {exc}", EXIT_UNSUITABLE) from exc
    except NotAnalyzable as exc:
        raise CliError(f"NotAnalyzable: {exc}", EXIT_UNSUITABLE) from exc
    return EXIT_OK


def cmd_precision(args: argparse.Namespace) -> int:
    scheme = _load_scheme(args)
    if args.max_degree < 0:
        raise CliError("--max-degree must be non-negative", EXIT_INPUT)
    try:
        rep = degree_of_precision(scheme, args.max_degree)
    except NotConvergent as exc:
        raise CliError(f"NotConvergent: {exc}", EXIT_UNSUITABLE) from exc
    shift = "none" if rep.shift is None else format_rational(rep.shift)
    text = (
        f"{scheme.name}: degree of precision {rep.degree_of_precision}, "
        f"degree of generation {rep.degree_of_generation}, shift {shift}"
    )
    _emit(args, {"scheme": scheme.name, **precision_to_dict(rep)}, text)
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace) -> int:
    try:
        catalog = default_catalog()
    except CatalogError as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc
    partner = {**PAIRS, **{q: b for b, q in PAIRS.items()}}
    rows = []
    for name, scheme in catalog.items():
        rows.append(
            {
                "name": name,
                "arity": scheme.mask.arity,
                "first_index": scheme.mask.first_index,
                "width": scheme.mask.width,
                "partner": partner.get(name),
                "provenance": scheme.provenance,
            }
        )
    text = "\n".join(
        f"{r['name']:<24} arity {r['arity']}  {r['width']:>3} coefficients"
        + (f"  pairs with {r['partner']}" if r["partner"] else "")
        for r in rows
    )
    _emit(args, {"schemes": rows}, text)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        report = run_verify(args.only)
    except CatalogError as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc
    _emit(args, report.to_dict(), report.to_text())
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_plot(args: argparse.Namespace) -> int:
    trace = _refine(args)
    title = f"{trace.scheme.name}, {trace.steps} step(s)"
    _write(args.out, render(scene_for_trace(trace), title))
    return EXIT_OK


COMMANDS = {
    "convert": cmd_convert,
    "refine": cmd_refine,
    "holder": cmd_holder,
    "precision": cmd_precision,
    "catalog": cmd_catalog,
    "verify": cmd_verify,
    "plot": cmd_plot,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    raise SystemExit(main())
