"""End-to-end drivers: the covering search loop and the SAT wrapper.

The covering loop alternates graph construction, cleaning, and
incompatibility elimination, extending the graph with fresh main vertices
when elimination gets stuck, until either a covering is verified or one of
the no-covering exits fires.  The SAT wrapper reduces a formula to a
decomposition pair, runs the loop, and converts the swap set into an
assignment; an assignment that fails evaluation is downgraded to an engine
error and never reported as satisfiable.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import List, Optional, Set, Tuple

import numpy as np

from . import cnf as cnf_mod
from .cnf import CnfFormula, assignment_from_swaps, evaluate, restrict_to_used, to_decomposition, to_matrix
from .decomposition import (
    DecompositionPair,
    StructuralError,
    apply_swaps,
    column_counts,
    input_length,
    is_alpha_covering,
    validate,
)
from .graph import (
    construct,
    find_forced_conflict_row,
    find_main_vertices,
)
from .instrument import DISABLED_OPS, NO_TRACE, OpCounter, Trace
from .procedures import (
    Eliminated,
    NeedsExtension,
    Unreachable,
    clean,
    eliminate_incompatibilities,
    extend,
)

# reason kinds
NON_REMOVABLE_USELESS_VERTEX = "non-removable-useless-vertex"
UNREACHABLE_COLUMN = "unreachable-column"
BOTH_COMPONENTS_SINGLE = "both-components-single"
EMPTY_CLAUSE = "empty-clause"
INCOMPATIBILITY_NOT_ELIMINATED = "incompatibility-not-eliminated"

REASON_KINDS = (
    NON_REMOVABLE_USELESS_VERTEX,
    UNREACHABLE_COLUMN,
    BOTH_COMPONENTS_SINGLE,
    EMPTY_CLAUSE,
    INCOMPATIBILITY_NOT_ELIMINATED,
)


class EngineInvariantError(RuntimeError):
    """An internal contract of the covering loop was violated."""


@dataclass(frozen=True)
class Reason:
    kind: str
    index: Optional[int] = None

    def __post_init__(self):
        if self.kind not in REASON_KINDS:
            raise ValueError(f"unknown reason kind {self.kind!r}")

    def as_dict(self) -> dict:
        return {"kind": self.kind, "index": self.index}


@dataclass(frozen=True)
class CoveringFound:
    swaps: frozenset


@dataclass(frozen=True)
class NoCovering:
    reason: Reason


@dataclass(frozen=True)
class Sat:
    assignment: Tuple[bool, ...]


@dataclass(frozen=True)
class Unsat:
    reason: Reason


@dataclass(frozen=True)
class EngineError:
    detail: str


@dataclass
class SolveRun:
    """One driver run: verdict plus instrumentation."""

    verdict: object
    ops: OpCounter
    trace: Trace
    extensions: int


# ---------------------------------------------------------------------------
# invariant checks (optional, used by the harness)
# ---------------------------------------------------------------------------

def _check_graph_invariants(graph, pair) -> None:
    g = graph
    edge_total = int(g.graph_edges.sum())
    if edge_total > (g.n - 1) * g.m:
        raise EngineInvariantError(
            f"edge bound violated: {edge_total} > (n-1)*m = {(g.n - 1) * g.m}"
        )
    col_sums = g.graph_edges.sum(axis=0, dtype=np.int64)
    if not np.array_equal(col_sums, g.indegree):
        raise EngineInvariantError("indegree does not match live incoming edge counts")
    dead = ~(g.formed & ~g.removed)
    if g.graph_edges[dead].any() or g.graph_edges[:, dead].any():
        raise EngineInvariantError("live edge touches a removed or unformed vertex")
    if int(np.count_nonzero(g.edge_in)) != edge_total:
        raise EngineInvariantError("edge_in records do not match the edge count")
    live_main = [
        v for v in range(1, g.n + 1) if g.main[v - 1] and g.formed[v - 1] and not g.removed[v - 1]
    ]
    mult = np.zeros(g.m, dtype=np.int64)
    for v in live_main:
        for c in g.main_columns[v - 1]:
            mult[c - 1] += 1
    if not np.array_equal(mult, g.multiplicity):
        raise EngineInvariantError("multiplicity does not match live main vertices")


# ---------------------------------------------------------------------------
# covering driver
# ---------------------------------------------------------------------------

def _run_covering(
    pair: DecompositionPair,
    ops: OpCounter,
    trace: Trace,
    *,
    shortcut: bool,
    invariant_checks: bool,
):
    report = validate(pair)
    if not report.ok:
        first = report.violations[0]
        raise StructuralError(
            f"invalid decomposition: {first.condition} at row={first.row} column={first.column}"
            + (f" (+{len(report.violations) - 1} more)" if len(report.violations) > 1 else "")
        )
    counts = column_counts(pair, ops=ops)
    if shortcut:
        hit = find_forced_conflict_row(pair, counts)
        if hit is not None:
            trace.emit("shortcut-hit", hit)
            trace.emit("verdict", 1, hit)
            return NoCovering(Reason(BOTH_COMPONENTS_SINGLE, hit)), 0

    graph = find_main_vertices(pair, counts, ops=ops, trace=trace)
    if graph is None:
        if not is_alpha_covering(pair):
            raise EngineInvariantError("no uncovered column yet the pair is not a covering")
        trace.emit("verdict", 0, 0)
        return CoveringFound(frozenset()), 0

    tried: Set[int] = set()
    extensions = 0
    while True:
        construct(graph, pair, ops=ops, trace=trace)
        if invariant_checks:
            _check_graph_invariants(graph, pair)
        blocking = clean(graph, pair, ops=ops, trace=trace)
        if invariant_checks:
            _check_graph_invariants(graph, pair)
        if blocking is not None:
            trace.emit("verdict", 1, blocking)
            return NoCovering(Reason(NON_REMOVABLE_USELESS_VERTEX, blocking)), extensions
        result = eliminate_incompatibilities(graph, pair, tried=tried, ops=ops, trace=trace)
        if invariant_checks:
            _check_graph_invariants(graph, pair)
        if isinstance(result, Unreachable):
            trace.emit("verdict", 1, result.column)
            return NoCovering(Reason(UNREACHABLE_COLUMN, result.column)), extensions
        if isinstance(result, Eliminated):
            swaps = frozenset(graph.live_vertices())
            if not is_alpha_covering(apply_swaps(pair, swaps)):
                raise EngineInvariantError("eliminated state failed the covering gate")
            trace.emit("verdict", 0, 0)
            return CoveringFound(swaps), extensions
        assert isinstance(result, NeedsExtension)
        extensions += 1
        if extensions > pair.n:
            raise EngineInvariantError(f"extension count exceeded n={pair.n}")
        extend(graph, pair, result.plan, ops=ops, trace=trace)


def solve_covering(
    pair: DecompositionPair,
    *,
    count_ops: bool = False,
    shortcut: bool = False,
    invariant_checks: bool = False,
) -> SolveRun:
    """Decide whether some swap set turns the pair into an alpha covering.

    Returns a run whose verdict is CoveringFound (with the swap set, verified
    against the covering check before return) or NoCovering with a reason.
    Internal contract violations raise EngineInvariantError.
    """
    ops = OpCounter() if count_ops else DISABLED_OPS
    trace = Trace(ops)
    verdict, extensions = _run_covering(
        pair, ops, trace, shortcut=shortcut, invariant_checks=invariant_checks
    )
    return SolveRun(verdict=verdict, ops=ops, trace=trace, extensions=extensions)


# ---------------------------------------------------------------------------
# SAT driver
# ---------------------------------------------------------------------------

def solve_sat(
    formula: CnfFormula,
    *,
    count_ops: bool = False,
    shortcut: bool = False,
    alpha: str = "neg",
    invariant_checks: bool = False,
    clause_labels: Optional[List[int]] = None,
) -> SolveRun:
    """Decide satisfiability through the covering reduction.

    Reason indices are reported in the formula's own numbering (variables as
    given; clauses by position) unless ``clause_labels`` supplies original
    file numbering.  A satisfying verdict is emitted only after the
    assignment passes evaluation; a failing assignment becomes EngineError.
    """
    ops = OpCounter() if count_ops else DISABLED_OPS
    trace = Trace(ops)

    def clause_label(j: int) -> int:
        if clause_labels is not None:
            return clause_labels[j - 1]
        return j

    for idx, clause in enumerate(formula.clauses, start=1):
        if not clause:
            trace.emit("verdict", 1, idx)
            return SolveRun(
                Unsat(Reason(EMPTY_CLAUSE, clause_label(idx))), ops, trace, 0
            )
    if not formula.clauses:
        assignment = tuple(False for _ in range(formula.num_vars))
        trace.emit("verdict", 0, 0)
        return SolveRun(Sat(assignment), ops, trace, 0)

    sub, used = restrict_to_used(formula)
    matrix = to_matrix(sub)
    pair = to_decomposition(matrix, alpha=alpha, ops=ops)

    try:
        verdict, extensions = _run_covering(
            pair, ops, trace, shortcut=shortcut, invariant_checks=invariant_checks
        )
    except EngineInvariantError as exc:
        return SolveRun(EngineError(str(exc)), ops, trace, 0)

    if isinstance(verdict, CoveringFound):
        if alpha == "neg":
            true_vars = {used[r - 1] for r in verdict.swaps}
        else:
            swapped = set(verdict.swaps)
            true_vars = {used[r - 1] for r in range(1, len(used) + 1) if r not in swapped}
        assignment = tuple(v in true_vars for v in range(1, formula.num_vars + 1))
        if not evaluate(formula, assignment):
            return SolveRun(
                EngineError("covering produced a non-satisfying assignment"),
                ops,
                trace,
                extensions,
            )
        return SolveRun(Sat(assignment), ops, trace, extensions)

    reason = verdict.reason
    if reason.kind in (NON_REMOVABLE_USELESS_VERTEX, BOTH_COMPONENTS_SINGLE):
        index = used[reason.index - 1]  # decomposition row -> variable
    elif reason.kind == UNREACHABLE_COLUMN:
        index = clause_label(reason.index)
    else:
        index = reason.index
    return SolveRun(Unsat(Reason(reason.kind, index)), ops, trace, extensions)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _assignment_literals(assignment: Tuple[bool, ...]) -> List[int]:
    return [i if value else -i for i, value in enumerate(assignment, start=1)]


def build_sat_report(
    instance: str,
    formula: CnfFormula,
    run: SolveRun,
    *,
    elapsed_ms: Optional[float] = None,
) -> dict:
    matrix_nonzeros = sum(len(set(abs(l) for l in c)) for c in formula.clauses)
    verdict = run.verdict
    if isinstance(verdict, Sat):
        verdict_str, assignment, reason = "SAT", _assignment_literals(verdict.assignment), None
    elif isinstance(verdict, Unsat):
        verdict_str, assignment, reason = "UNSAT", None, verdict.reason.as_dict()
    else:
        verdict_str, assignment, reason = "ERROR", None, None
    report = {
        "instance": instance,
        "verdict": verdict_str,
        "assignment": assignment,
        "reason": reason,
        "n": formula.num_vars,
        "m": len(formula.clauses),
        "input_length": matrix_nonzeros,
        "op_total": run.ops.total,
        "op_by_kind": run.ops.as_dict(),
        "extensions": run.extensions,
        "elapsed_ms": elapsed_ms,
        "trace_hash": run.trace.sha256(),
    }
    if isinstance(verdict, EngineError):
        report["error_detail"] = verdict.detail
    return report


def build_covering_report(
    instance: str,
    pair: DecompositionPair,
    run: SolveRun,
    *,
    elapsed_ms: Optional[float] = None,
) -> dict:
    verdict = run.verdict
    if isinstance(verdict, CoveringFound):
        verdict_str, reason = "COVERING", None
        swaps = sorted(verdict.swaps)
    else:
        verdict_str, reason = "NO_COVERING", verdict.reason.as_dict()
        swaps = None
    return {
        "instance": instance,
        "verdict": verdict_str,
        "assignment": None,
        "swaps": swaps,
        "reason": reason,
        "n": pair.n,
        "m": pair.m,
        "input_length": input_length(pair),
        "op_total": run.ops.total,
        "op_by_kind": run.ops.as_dict(),
        "extensions": run.extensions,
        "elapsed_ms": elapsed_ms,
        "trace_hash": run.trace.sha256(),
    }


def report_json(report: dict) -> str:
    """Canonical serialization: sorted keys, compact separators."""
    return json.dumps(report, sort_keys=True, separators=(",", ":"))


def timed_solve_sat(formula: CnfFormula, instance: str, **kwargs) -> Tuple[SolveRun, dict]:
    start = time.perf_counter()
    run = solve_sat(formula, **kwargs)
    elapsed = (time.perf_counter() - start) * 1000.0
    return run, build_sat_report(instance, formula, run, elapsed_ms=round(elapsed, 3))
