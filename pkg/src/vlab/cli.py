"""Command-line front end.

Commands: bounds (the comparison table), sequence (best approximation
records to JSON), oracle (single brute-force minimization), graph
(successive-minima export), verify (margin report on a stored sequence).

Exit codes: 0 success, 1 domain error, 2 usage error.  With --format json a
domain error is also emitted as a JSON object on stderr.  All outputs are
byte-deterministic for identical inputs; --jobs caps worker processes (the
current engines are sequential, so any cap yields identical output).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .bestapprox import best_approx_sequence, derive_exponents, min_poly_at_height
from .bestapprox.records import SequenceData, ball_to_json
from .bounds import bounds_table, format_table_csv, format_table_json, format_table_text
from .errors import VlabError
from .polyalg import enrich_independence
from .paramgeom import (combined_graph_csv, default_q_grid, graph_svg,
                        shifted_frame, successive_minima_exact,
                        successive_minima_pool)
from .realspec import parse_xi, real_from_spec
from .verify import VerifyOptions, full_report, report_json_bytes

DEFAULT_PRECISION = 192


def _precision_default() -> int:
    env = os.environ.get("VLAB_PRECISION_BITS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise SystemExit("VLAB_PRECISION_BITS must be an integer")
    return DEFAULT_PRECISION


def _write_output(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_sequence(path: str) -> SequenceData:
    with open(path, "r", encoding="utf-8") as fh:
        return SequenceData.from_json(json.load(fh))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vlab",
        description="Verified laboratory for uniform polynomial approximation "
                    "on Veronese curves.")
    parser.add_argument("--version", action="version", version=f"vlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common_fmt = dict(choices=["text", "csv", "json"], default="text",
                      help="output format (default: text)")

    p_bounds = sub.add_parser("bounds", help="emit the bound-constant table")
    p_bounds.add_argument("--n-min", type=int, default=2, help="first degree (default 2)")
    p_bounds.add_argument("--n-max", type=int, default=9, help="last degree (default 9)")
    p_bounds.add_argument("--format", **common_fmt)
    p_bounds.add_argument("--out", help="output path (default stdout)")

    p_seq = sub.add_parser("sequence",
                           help="compute best approximation records for (xi, n)")
    p_seq.add_argument("--xi", required=True,
                       help="xi spec: sqrt:K | cbrt:K | root:K:J | dec:DIGITS | "
                            "rat:P/Q | const:e|pi|ln2 | cf:a0,a1,...")
    p_seq.add_argument("--n", type=int, required=True, help="polynomial degree cap")
    p_seq.add_argument("--max-height", type=int, default=None,
                       help="height limit (defaults per n: 10^4/500/60/25)")
    p_seq.add_argument("--precision-bits", type=int, default=None,
                       help="working precision (default: env VLAB_PRECISION_BITS or 192)")
    p_seq.add_argument("--out", help="output path for the sequence JSON (default stdout)")

    p_oracle = sub.add_parser("oracle",
                              help="brute-force minimizer of |P(xi)| at one height")
    p_oracle.add_argument("--xi", required=True, help="xi spec (see sequence)")
    p_oracle.add_argument("--n", type=int, required=True)
    p_oracle.add_argument("--height", type=int, required=True)
    p_oracle.add_argument("--precision-bits", type=int, default=None)
    p_oracle.add_argument("--format", choices=["text", "json"], default="text")
    p_oracle.add_argument("--out", help="output path (default stdout)")

    p_graph = sub.add_parser("graph",
                             help="successive-minima graph data for a stored sequence")
    p_graph.add_argument("--seq", required=True, help="sequence JSON from 'sequence'")
    p_graph.add_argument("--mode", choices=["exact", "pool"], default="pool",
                         help="exact minima (enumerated) or pool upper bounds "
                              "(shifted frame; default)")
    p_graph.add_argument("--q-max", type=float, default=10.0, help="grid end (default 10)")
    p_graph.add_argument("--q-list", help="comma-separated q values overriding the grid")
    p_graph.add_argument("--out", help="CSV output path (default stdout)")
    p_graph.add_argument("--svg", help="optional SVG rendering path")

    p_verify = sub.add_parser("verify", help="margin report for a stored sequence")
    p_verify.add_argument("--seq", required=True, help="sequence JSON from 'sequence'")
    p_verify.add_argument("--slack", type=float, default=0.05,
                          help="slack for asymptotic margins (default 0.05)")
    p_verify.add_argument("--no-lemma31", action="store_true",
                          help="skip the enumeration-heavy last-minimum check")
    p_verify.add_argument("--format", choices=["text", "json"], default="text")
    p_verify.add_argument("--out", help="output path (default stdout)")

    for p in (p_bounds, p_seq, p_oracle, p_graph, p_verify):
        p.add_argument("--jobs", type=int, default=1,
                       help="worker cap; output is independent of the value")
    return parser


def _cmd_bounds(args) -> int:
    rows = bounds_table(args.n_min, args.n_max)
    if args.format == "csv":
        _write_output(format_table_csv(rows), args.out)
    elif args.format == "json":
        _write_output(json.dumps(format_table_json(rows), indent=1, sort_keys=True)
                      + "\n", args.out)
    else:
        _write_output(format_table_text(rows), args.out)
    return 0


def _cmd_sequence(args) -> int:
    bits = args.precision_bits or _precision_default()
    spec = parse_xi(args.xi)
    seq = best_approx_sequence(spec, args.n, args.max_height, precision_bits=bits)
    derive_exponents(seq)
    if len(seq.records) >= 3:
        enrich_independence(seq)
    _write_output(json.dumps(seq.to_json(), indent=1, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_oracle(args) -> int:
    bits = args.precision_bits or _precision_default()
    spec = parse_xi(args.xi)
    xi = real_from_spec(spec, bits)
    poly, value = min_poly_at_height(xi, args.n, args.height, spec=spec)
    if args.format == "json":
        obj = {"coeffs": list(poly.coeffs), "height": poly.height(),
               "abs_value": ball_to_json(value.compress(96))}
        _write_output(json.dumps(obj, indent=1, sort_keys=True) + "\n", args.out)
    else:
        _write_output(
            f"minimizer at height <= {args.height}: {poly.pretty()}\n"
            f"|P(xi)| = {float(value.mid):.12e} (radius {float(value.rad):.2e})\n",
            args.out)
    return 0


def _cmd_graph(args) -> int:
    seq = _load_sequence(args.seq)
    if seq.n < 2:
        raise VlabError("graph mode needs n >= 2 (the ambient space degenerates at n=1)")
    if args.q_list:
        qs = [Fraction(part) for part in args.q_list.split(",")]
    else:
        qs = default_q_grid(Fraction(args.q_max).limit_denominator(10**6))
    xi = real_from_spec(seq.xi_spec, seq.precision_bits + 64)
    frame = shifted_frame(seq, xi)
    minima = []
    for q in qs:
        if args.mode == "exact":
            minima.append(successive_minima_exact(frame.xi, seq.n, q))
        else:
            values, incomplete = successive_minima_pool(frame, q)
            if incomplete:
                raise VlabError(
                    "pool cannot span the ambient space; compute a longer sequence")
            minima.append(values)
    header_note = "" if args.mode == "exact" else "# pool upper bounds, shifted frame\n"
    _write_output(header_note + combined_graph_csv(qs, minima, seq.n), args.out)
    if args.svg:
        _write_output(graph_svg(qs, minima, seq.n), args.svg)
    return 0


def _cmd_verify(args) -> int:
    seq = _load_sequence(args.seq)
    slack = Fraction(args.slack).limit_denominator(10**6)
    options = VerifyOptions(slack=slack, lemma31=not args.no_lemma31)
    report = full_report(seq, options)
    if args.format == "json":
        _write_output(report_json_bytes(report).decode() + "\n", args.out)
    else:
        _write_output(report.to_text(), args.out)
    return 0


_COMMANDS = {
    "bounds": _cmd_bounds,
    "sequence": _cmd_sequence,
    "oracle": _cmd_oracle,
    "graph": _cmd_graph,
    "verify": _cmd_verify,
}


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return _COMMANDS[args.command](args)
    except VlabError as exc:
        if getattr(args, "format", "text") == "json":
            sys.stderr.write(json.dumps(
                {"error": type(exc).__name__, "message": str(exc)}) + "\n")
        else:
            sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
