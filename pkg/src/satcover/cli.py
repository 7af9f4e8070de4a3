"""Command line front end.

Subcommands: ``solve`` (DIMACS CNF), ``covering`` (raw decomposition file),
``fuzz`` / ``diff-exhaustive`` (differential verification runs), ``probe``
(operation-count growth measurement).

Exit codes follow the SAT-competition convention for ``solve`` and
``covering``: 10 = positive verdict, 20 = negative verdict, 1 = engine
error, 2 = input error.  Harness subcommands exit 0 normally and 3 when a
soundness-gate or invariant violation occurred.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import List, Optional, Tuple

import numpy as np

from .cnf import ParseError, parse_dimacs
from .decomposition import DecompositionPair, StructuralError
from .harness import FuzzConfig, complexity_probe, diff_exhaustive, differential_run
from .solver import (
    CoveringFound,
    EngineError,
    Sat,
    Unsat,
    build_covering_report,
    build_sat_report,
    report_json,
    solve_covering,
    solve_sat,
)

EXIT_POSITIVE = 10
EXIT_NEGATIVE = 20
EXIT_ENGINE_ERROR = 1
EXIT_INPUT_ERROR = 2
EXIT_VIOLATION = 3


def _fail_input(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT_ERROR


def _write_outputs(args, run, report: dict) -> None:
    if getattr(args, "json", None):
        with open(args.json, "w", encoding="ascii") as fh:
            fh.write(report_json(report) + "\n")
    if getattr(args, "trace", None):
        with open(args.trace, "wb") as fh:
            fh.write(run.trace.serialize())


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def _clause_labels(num_clauses: int, removed: Tuple[int, ...]) -> Optional[List[int]]:
    """Original file positions of the retained clauses, or None when nothing
    was dropped during preprocessing."""
    if not removed:
        return None
    gone = set(removed)
    total = num_clauses + len(removed)
    return [i for i in range(1, total + 1) if i not in gone]


def _cmd_solve(args) -> int:
    try:
        with open(args.file, "r", encoding="ascii") as fh:
            text = fh.read()
    except OSError as exc:
        return _fail_input(str(exc))
    try:
        formula, pre = parse_dimacs(text)
    except ParseError as exc:
        return _fail_input(str(exc))

    labels = _clause_labels(len(formula.clauses), pre.removed_tautologies)
    start = time.perf_counter()
    run = solve_sat(
        formula,
        count_ops=args.count_ops,
        shortcut=args.shortcut_43,
        alpha=args.alpha,
        clause_labels=labels,
    )
    elapsed_ms = round((time.perf_counter() - start) * 1000.0, 3)
    report = build_sat_report(args.file, formula, run, elapsed_ms=elapsed_ms)
    _write_outputs(args, run, report)

    verdict = run.verdict
    if isinstance(verdict, Sat):
        print("s SATISFIABLE")
        lits = " ".join(
            str(i if v else -i) for i, v in enumerate(verdict.assignment, start=1)
        )
        print(f"v {lits} 0" if lits else "v 0")
        return EXIT_POSITIVE
    if isinstance(verdict, Unsat):
        print("s UNSATISFIABLE")
        print(f"c reason {verdict.reason.kind} index {verdict.reason.index}")
        return EXIT_NEGATIVE
    assert isinstance(verdict, EngineError)
    print("s UNKNOWN")
    print(f"error: engine: {verdict.detail}", file=sys.stderr)
    return EXIT_ENGINE_ERROR


# ---------------------------------------------------------------------------
# covering
# ---------------------------------------------------------------------------

def parse_decomp(text: str) -> DecompositionPair:
    """Raw decomposition file: "n m" header, n rows of m chars in {0,1} for
    the alpha matrix, one blank line, n rows for the complement matrix."""
    lines = text.splitlines()

    def err(lineno: int, message: str) -> ParseError:
        return ParseError(message, line=lineno)

    if not lines:
        raise err(1, "empty file")
    header = lines[0].split()
    if len(header) != 2:
        raise err(1, "expected header 'n m'")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise err(1, "expected integer header 'n m'") from None
    if n < 1 or m < 1:
        raise err(1, "n and m must be positive")
    expected = 1 + n + 1 + n
    body = [line.rstrip("\n") for line in lines]
    while len(body) < expected:
        body.append("")

    def read_block(first_line: int) -> np.ndarray:
        rows = np.zeros((n, m), dtype=np.uint8)
        for i in range(n):
            lineno = first_line + i
            row = body[lineno - 1].strip()
            if len(row) != m:
                raise err(lineno, f"expected {m} characters, got {len(row)}")
            for j, ch in enumerate(row):
                if ch not in "01":
                    raise err(lineno, f"invalid character {ch!r}")
                rows[i, j] = ch == "1"
        return rows

    alpha = read_block(2)
    blank_line = 2 + n
    if body[blank_line - 1].strip():
        raise err(blank_line, "expected a blank separator line")
    alpha_bar = read_block(blank_line + 1)
    tail = blank_line + n + 1
    for lineno in range(tail, len(body) + 1):
        if body[lineno - 1].strip():
            raise err(lineno, "unexpected trailing content")
    return DecompositionPair(sm_alpha=alpha, sm_alpha_bar=alpha_bar)


def emit_decomp(pair: DecompositionPair) -> str:
    lines = [f"{pair.n} {pair.m}"]
    lines.extend("".join(str(int(x)) for x in row) for row in pair.sm_alpha)
    lines.append("")
    lines.extend("".join(str(int(x)) for x in row) for row in pair.sm_alpha_bar)
    return "\n".join(lines) + "\n"


def _cmd_covering(args) -> int:
    try:
        with open(args.file, "r", encoding="ascii") as fh:
            text = fh.read()
    except OSError as exc:
        return _fail_input(str(exc))
    try:
        pair = parse_decomp(text)
    except (ParseError, StructuralError) as exc:
        return _fail_input(str(exc))

    start = time.perf_counter()
    try:
        run = solve_covering(
            pair, count_ops=args.count_ops, shortcut=args.shortcut_43
        )
    except StructuralError as exc:
        return _fail_input(str(exc))
    except Exception as exc:  # invariant breakage is an engine error, not a crash
        print("s UNKNOWN")
        print(f"error: engine: {exc}", file=sys.stderr)
        return EXIT_ENGINE_ERROR
    elapsed_ms = round((time.perf_counter() - start) * 1000.0, 3)
    report = build_covering_report(args.file, pair, run, elapsed_ms=elapsed_ms)
    _write_outputs(args, run, report)

    verdict = run.verdict
    if isinstance(verdict, CoveringFound):
        print("s COVERING")
        swaps = " ".join(str(v) for v in sorted(verdict.swaps))
        print(f"v {swaps} 0" if swaps else "v 0")
        return EXIT_POSITIVE
    print("s NO-COVERING")
    print(f"c reason {verdict.reason.kind} index {verdict.reason.index}")
    return EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# harness subcommands
# ---------------------------------------------------------------------------

def _parse_range(text: str) -> Tuple[int, int]:
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise ValueError(f"bad range {text!r}")
    return lo, hi


def _parse_sizes(text: str) -> List[int]:
    sizes = [int(float(part)) for part in text.split(",") if part.strip()]
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError(f"bad sizes {text!r}")
    return sizes


def _emit_report(args, doc: dict) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2)
    print(text)
    if getattr(args, "json", None):
        with open(args.json, "w", encoding="ascii") as fh:
            fh.write(text + "\n")


def _cmd_fuzz(args) -> int:
    try:
        cfg = FuzzConfig(
            seed=args.seed,
            num_instances=args.count,
            var_range=_parse_range(args.vars),
            clause_range=_parse_range(args.clauses),
            width_range=_parse_range(args.width),
            satisfiable_bias="planted" if args.planted else "none",
        )
    except ValueError as exc:
        return _fail_input(str(exc))
    report = differential_run(cfg)
    _emit_report(args, report.as_dict())
    return EXIT_VIOLATION if report.violation else 0


def _cmd_diff_exhaustive(args) -> int:
    if args.max_n < 1 or args.max_m < 1 or args.max_width < 1:
        return _fail_input("bounds must be positive")
    if args.max_n > 4:
        return _fail_input("max-n above 4 is refused (exhaustive space too large)")
    report = diff_exhaustive(args.max_n, args.max_m, args.max_width)
    _emit_report(args, report.as_dict())
    if report.violation or not report.extra.get("reduction_check_passed", True):
        return EXIT_VIOLATION
    return 0


def _cmd_probe(args) -> int:
    try:
        sizes = _parse_sizes(args.sizes)
    except ValueError as exc:
        return _fail_input(str(exc))
    doc = complexity_probe(
        sizes,
        seed=args.seed,
        instances_per_size=args.instances_per_size,
        width=args.width,
    )
    _emit_report(args, doc)
    return EXIT_VIOLATION if doc["gate_failures"] else 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satcover",
        description="Covering-search SAT engine with a differential verification harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve a DIMACS CNF file")
    solve.add_argument("file")
    solve.add_argument("--json", metavar="OUT", help="write the JSON report here")
    solve.add_argument("--trace", metavar="OUT", help="write the serialized trace here")
    solve.add_argument("--count-ops", action="store_true")
    solve.add_argument("--alpha", choices=("neg", "pos"), default="neg")
    solve.add_argument(
        "--shortcut-43",
        action="store_true",
        dest="shortcut_43",
        help="enable the advisory forced-conflict early exit",
    )
    solve.set_defaults(func=_cmd_solve)

    covering = sub.add_parser("covering", help="solve a raw decomposition file")
    covering.add_argument("file")
    covering.add_argument("--json", metavar="OUT")
    covering.add_argument("--trace", metavar="OUT")
    covering.add_argument("--count-ops", action="store_true")
    covering.add_argument(
        "--shortcut-43", action="store_true", dest="shortcut_43"
    )
    covering.set_defaults(func=_cmd_covering)

    fuzz = sub.add_parser("fuzz", help="seeded random differential run")
    fuzz.add_argument("--seed", type=int, required=True)
    fuzz.add_argument("--count", type=int, default=100)
    fuzz.add_argument("--vars", default="1..12", help="range a..b")
    fuzz.add_argument("--clauses", default="1..30", help="range a..b")
    fuzz.add_argument("--width", default="1..3", help="range a..b")
    fuzz.add_argument("--planted", action="store_true")
    fuzz.add_argument("--json", metavar="OUT")
    fuzz.set_defaults(func=_cmd_fuzz)

    diff = sub.add_parser(
        "diff-exhaustive", help="differential run over the bounded formula space"
    )
    diff.add_argument("--max-n", type=int, default=3)
    diff.add_argument("--max-m", type=int, default=4)
    diff.add_argument("--max-width", type=int, default=3)
    diff.add_argument("--json", metavar="OUT")
    diff.set_defaults(func=_cmd_diff_exhaustive)

    probe = sub.add_parser("probe", help="operation-count growth measurement")
    probe.add_argument("--sizes", default="1e2,1e3,1e4", help="comma-separated, 1e_ ok")
    probe.add_argument("--seed", type=int, default=2024)
    probe.add_argument("--instances-per-size", type=int, default=2)
    probe.add_argument("--width", type=int, default=3)
    probe.add_argument("--json", metavar="OUT")
    probe.set_defaults(func=_cmd_probe)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
