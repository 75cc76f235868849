"""Command-line interface: analyze distance matrices from files or stdin.

Exit codes: 0 success, 1 malformed or invalid input, 2 internal check
failure (a verification that did not pass).  Human-readable diagnostics go
to stderr; stdout carries exactly one JSON document (or DOT for
`realize --out dot`).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

from .cutpoints import compute_cut_points
from .errors import MetricError, ParseError, RealizationCheckFailed
from .io import (
    cut_system_to_json,
    decomposition_to_json,
    metric_to_json,
    parse_matrix,
    realization_to_dot,
    realization_to_json,
    report_to_json,
)
from .oracle import generate_block_instance, reference_cut_points, verify_cut_system
from .realization import build_block_realization, decompose


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _fail(exc: Exception, code: int) -> int:
    print(f"error: {exc}", file=sys.stderr)
    _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
    return code


def slope(points: list[tuple[int, float]]) -> float | None:
    """Least-squares slope of log(time) against log(n)."""
    if len(points) < 2:
        return None
    xs = [math.log(n) for n, _ in points]
    ys = [math.log(max(t, 1e-9)) for _, t in points]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den


def run_bench(sizes, ref_sizes, seed: int) -> dict:
    """Time the engine (and the naive reference) on generated instances."""
    fast = []
    for n in sizes:
        metric = generate_block_instance(n, seed)
        start = time.perf_counter()
        compute_cut_points(metric)
        fast.append((n, time.perf_counter() - start))
    reference = []
    for n in ref_sizes:
        metric = generate_block_instance(n, seed)
        start = time.perf_counter()
        reference_cut_points(metric, cap=max(ref_sizes))
        reference.append((n, time.perf_counter() - start))
    return {
        "fast": [{"n": n, "seconds": t} for n, t in fast],
        "reference": [{"n": n, "seconds": t} for n, t in reference],
        "fast_slope": slope(fast),
        "reference_slope": slope(reference),
    }


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metricblocks",
        description="Block splits, cutpoints and block decompositions of finite metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p):
        p.add_argument("file", nargs="?", default="-", help="matrix file, or - for stdin")
        p.add_argument("--format", choices=("csv", "phylip"), default="csv")

    add_input(sub.add_parser("validate", help="check the metric axioms"))
    add_input(sub.add_parser("splits", help="compute the block splits"))
    add_input(sub.add_parser("cutpoints", help="compute cutpoints and block splits"))
    p = sub.add_parser("realize", help="build the block realization graph")
    add_input(p)
    p.add_argument("--out", choices=("json", "dot"), default="json")
    add_input(sub.add_parser("decompose", help="decompose into block metrics"))
    p = sub.add_parser("verify", help="cross-check the engine against brute force")
    add_input(p)
    p.add_argument("--cap", type=int, default=10, help="max n for oracle comparisons")
    p = sub.add_parser("bench", help="time the engine on generated instances")
    p.add_argument("--sizes", type=_int_list, default=[50, 100, 200, 400])
    p.add_argument("--ref-sizes", type=_int_list, default=[20, 40, 80])
    p.add_argument("--seed", type=int, default=7)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "bench":
        _emit(run_bench(args.sizes, args.ref_sizes, args.seed))
        return 0

    try:
        metric = parse_matrix(_read_input(args.file), args.format)
    except (ParseError, MetricError, ValueError, OSError) as exc:
        return _fail(exc, 1)

    if args.command == "validate":
        _emit(metric_to_json(metric))
        return 0

    cs = compute_cut_points(metric)
    if args.command == "splits":
        doc = cut_system_to_json(cs)
        _emit({"labels": doc["labels"], "block_splits": doc["block_splits"]})
        return 0
    if args.command == "cutpoints":
        _emit(cut_system_to_json(cs))
        return 0
    if args.command == "realize":
        try:
            graph = build_block_realization(metric, cs)
        except RealizationCheckFailed as exc:
            return _fail(exc, 2)
        if args.out == "dot":
            sys.stdout.write(realization_to_dot(graph))
        else:
            _emit(realization_to_json(graph))
        return 0
    if args.command == "decompose":
        try:
            dec = decompose(metric, cs)
        except RealizationCheckFailed as exc:
            return _fail(exc, 2)
        _emit(decomposition_to_json(dec))
        return 0
    if args.command == "verify":
        report = verify_cut_system(metric, cs, cap=args.cap)
        _emit(report_to_json(report))
        if not report.overall:
            for c in report.failures():
                print(f"failed: {c.name}: {c.witness}", file=sys.stderr)
            return 2
        return 0
    raise AssertionError(f"unhandled command {args.command}")


run = main

if __name__ == "__main__":
    sys.exit(main())
