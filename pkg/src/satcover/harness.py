"""Verification harness: oracles, generators, differential runs, probes.

The engine's verdicts are treated as hypotheses.  Brute-force enumeration
and a budgeted DPLL solver act as independent oracles; seeded generators
produce deterministic corpora; disagreements are archived with a shrunken
re-runnable instance.  Disagreement with the oracle is a reportable finding,
not a harness failure: only soundness-gate and invariant violations are
fatal.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from .cnf import (
    CnfFormula,
    emit_dimacs,
    evaluate,
    restrict_to_used,
    to_decomposition,
    to_matrix,
)
from .decomposition import DecompositionPair, input_length
from .solver import EngineError, Sat, SolveRun, Unsat, solve_sat

BRUTE_VAR_LIMIT = 25
DEFAULT_DPLL_BUDGET = 2_000_000


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def brute_sat(
    formula: CnfFormula, *, limit_vars: int = BRUTE_VAR_LIMIT, chunk_bits: int = 16
) -> Tuple[bool, Optional[Tuple[bool, ...]]]:
    """Exhaustive satisfiability check by enumerating all assignments.

    Assignments are scanned in ascending bitmask order (bit i-1 holds x_i),
    so the witness is deterministic.  Refuses formulas above the variable
    limit.
    """
    n = formula.num_vars
    if n > limit_vars:
        raise ValueError(f"brute_sat refuses n={n} > {limit_vars}")
    if any(len(clause) == 0 for clause in formula.clauses):
        return False, None
    if not formula.clauses:
        return True, tuple(False for _ in range(n))
    m = len(formula.clauses)
    pos = np.zeros(m, dtype=np.int64)
    neg = np.zeros(m, dtype=np.int64)
    for j, clause in enumerate(formula.clauses):
        for lit in clause:
            if lit > 0:
                pos[j] |= 1 << (lit - 1)
            else:
                neg[j] |= 1 << (-lit - 1)
    total = 1 << n
    chunk = 1 << min(chunk_bits, n)
    for start in range(0, total, chunk):
        block = np.arange(start, min(start + chunk, total), dtype=np.int64)
        alive = np.ones(block.size, dtype=bool)
        for j in range(m):
            alive &= ((block & pos[j]) != 0) | ((~block & neg[j]) != 0)
            if not alive.any():
                break
        hits = np.nonzero(alive)[0]
        if hits.size:
            a = int(block[hits[0]])
            return True, tuple(bool((a >> i) & 1) for i in range(n))
    return False, None


def brute_covering(
    pair: DecompositionPair, *, limit_rows: int = BRUTE_VAR_LIMIT
) -> Tuple[bool, Optional[frozenset]]:
    """Exhaustive covering check by enumerating all swap sets.

    Swap sets are scanned in ascending bitmask order (bit i-1 swaps row i),
    so the witness is deterministic (the empty set comes first).
    """
    if pair.n > limit_rows:
        raise ValueError(f"brute_covering refuses n={pair.n} > {limit_rows}")
    alpha_masks = []
    bar_masks = []
    for i in range(pair.n):
        a = 0
        b = 0
        for j in range(pair.m):
            if pair.sm_alpha[i, j]:
                a |= 1 << j
            if pair.sm_alpha_bar[i, j]:
                b |= 1 << j
        alpha_masks.append(a)
        bar_masks.append(b)
    full = (1 << pair.m) - 1
    for s in range(1 << pair.n):
        cover = 0
        for i in range(pair.n):
            cover |= bar_masks[i] if (s >> i) & 1 else alpha_masks[i]
        if cover == full:
            return True, frozenset(i + 1 for i in range(pair.n) if (s >> i) & 1)
    return False, None


def _dpll_simplify(clauses: List[List[int]], lit: int) -> Optional[List[List[int]]]:
    out = []
    for clause in clauses:
        if lit in clause:
            continue
        if -lit in clause:
            reduced = [l for l in clause if l != -lit]
            if not reduced:
                return None  # empty clause: conflict
            out.append(reduced)
        else:
            out.append(clause)
    return out


def dpll(
    formula: CnfFormula, *, step_budget: int = DEFAULT_DPLL_BUDGET
) -> Tuple[Optional[bool], Optional[Tuple[bool, ...]]]:
    """Backtracking satisfiability with unit propagation and a step budget.

    Returns (True, witness), (False, None), or (None, None) when the budget
    runs out.  Branching picks the smallest unassigned variable, true first,
    so the witness is deterministic.
    """
    if any(len(clause) == 0 for clause in formula.clauses):
        return False, None
    budget = [step_budget]

    def search(clauses: List[List[int]], assignment: Dict[int, bool]):
        while True:
            budget[0] -= 1
            if budget[0] <= 0:
                return None
            if not clauses:
                return assignment
            unit = next((c[0] for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            assignment[abs(unit)] = unit > 0
            clauses = _dpll_simplify(clauses, unit)
            if clauses is None:
                return False
        var = min(abs(l) for clause in clauses for l in clause)
        for value in (True, False):
            lit = var if value else -var
            child = dict(assignment)
            child[var] = value
            reduced = _dpll_simplify(clauses, lit)
            if reduced is None:
                continue
            result = search(reduced, child)
            if result is None:
                return None
            if result is not False:
                return result
        return False

    result = search([list(c) for c in formula.clauses], {})
    if result is None:
        return None, None
    if result is False:
        return False, None
    witness = tuple(result.get(v, False) for v in range(1, formula.num_vars + 1))
    return True, witness


def oracle_status(
    formula: CnfFormula,
    *,
    brute_limit: int = BRUTE_VAR_LIMIT,
    dpll_budget: int = DEFAULT_DPLL_BUDGET,
) -> str:
    """Adjudicate with brute force when small enough, budgeted DPLL above."""
    if formula.num_vars <= brute_limit:
        sat, _ = brute_sat(formula, limit_vars=brute_limit)
        return "SAT" if sat else "UNSAT"
    result, _ = dpll(formula, step_budget=dpll_budget)
    if result is None:
        return "UNKNOWN"
    return "SAT" if result else "UNSAT"


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FuzzConfig:
    """Deterministic corpus description; instance i depends only on (seed, i)."""

    seed: int
    num_instances: int = 100
    var_range: Tuple[int, int] = (1, 12)
    clause_range: Tuple[int, int] = (1, 30)
    width_range: Tuple[int, int] = (1, 3)
    satisfiable_bias: str = "none"  # "none" | "planted"

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "num_instances": self.num_instances,
            "var_range": list(self.var_range),
            "clause_range": list(self.clause_range),
            "width_range": list(self.width_range),
            "satisfiable_bias": self.satisfiable_bias,
        }


def random_cnf(cfg: FuzzConfig, index: int) -> CnfFormula:
    """Instance ``index`` of the corpus: a pure function of (seed, index).

    In planted mode a hidden assignment is drawn first and every clause gets
    one literal sign flipped if needed so the hidden assignment satisfies it.
    """
    if index < 0:
        raise ValueError("index must be non-negative")
    if cfg.satisfiable_bias not in ("none", "planted"):
        raise ValueError(f"unknown satisfiable_bias {cfg.satisfiable_bias!r}")
    rng = random.Random(cfg.seed * (2**32) + index)
    n = rng.randint(*cfg.var_range)
    m = rng.randint(*cfg.clause_range)
    planted = cfg.satisfiable_bias == "planted"
    hidden = [rng.random() < 0.5 for _ in range(n)] if planted else None
    clauses: List[List[int]] = []
    for _ in range(m):
        w = rng.randint(*cfg.width_range)
        w = max(1, min(w, n))
        variables = rng.sample(range(1, n + 1), w)
        clause = [v if rng.random() < 0.5 else -v for v in variables]
        if planted and not any((lit > 0) == hidden[abs(lit) - 1] for lit in clause):
            k = rng.randrange(w)
            v = abs(clause[k])
            clause[k] = v if hidden[v - 1] else -v
        clauses.append(clause)
    return CnfFormula(num_vars=n, clauses=clauses)


def enumerate_clause_universe(max_n: int, max_width: int) -> List[List[int]]:
    """Every clause over vars 1..max_n with 1..max_width distinct variables,
    no duplicate literals, no tautologies; canonical order."""
    universe: List[List[int]] = []
    for size in range(1, min(max_width, max_n) + 1):
        for combo in itertools.combinations(range(1, max_n + 1), size):
            for signs in itertools.product((1, -1), repeat=size):
                universe.append([s * v for s, v in zip(signs, combo)])
    return universe


def enumerate_formulas(max_n: int, max_m: int, max_width: int) -> Iterator[CnfFormula]:
    """Every formula (clause multiset, 1..max_m clauses) over the universe."""
    universe = enumerate_clause_universe(max_n, max_width)
    for m in range(1, max_m + 1):
        for combo in itertools.combinations_with_replacement(range(len(universe)), m):
            yield CnfFormula(max_n, [list(universe[k]) for k in combo])


# ---------------------------------------------------------------------------
# differential adjudication
# ---------------------------------------------------------------------------

@dataclass
class DifferentialReport:
    """Outcome tallies; total = agreements + disagreements + gate_failures."""

    config: dict
    generated: int
    total: int
    agreements: int
    disagreements: List[dict]
    gate_failures: int
    engine_errors: List[dict]
    unknown: int
    op_stats: dict
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        doc = {
            "config": self.config,
            "generated": self.generated,
            "total": self.total,
            "agreements": self.agreements,
            "disagreements": self.disagreements,
            "gate_failures": self.gate_failures,
            "engine_errors": self.engine_errors,
            "unknown": self.unknown,
            "op_stats": self.op_stats,
        }
        doc.update(self.extra)
        return doc

    @property
    def violation(self) -> bool:
        return self.gate_failures > 0


def _engine_status(run: SolveRun) -> str:
    if isinstance(run.verdict, Sat):
        return "SAT"
    if isinstance(run.verdict, Unsat):
        return "UNSAT"
    return "ERROR"


def _op_stats(points: List[Tuple[int, int]]) -> dict:
    """Max op_total / N^3 ratio and the fitted log-log exponent."""
    usable = [(N, ops) for N, ops in points if N > 0 and ops > 0]
    stats: dict = {"points": len(usable), "max_ratio_cubic": None, "fitted_exponent": None}
    if usable:
        stats["max_ratio_cubic"] = max(ops / N**3 for N, ops in usable)
    if len({N for N, _ in usable}) >= 2:
        logs_n = np.log10([N for N, _ in usable])
        logs_ops = np.log10([ops for _, ops in usable])
        slope = float(np.polyfit(logs_n, logs_ops, 1)[0])
        stats["fitted_exponent"] = round(slope, 4)
    return stats


def shrink_disagreement(
    formula: CnfFormula, check: Callable[[CnfFormula], bool]
) -> CnfFormula:
    """Greedy minimization preserving ``check``: drop clauses, then drop
    literals, then renumber variables densely.  Every step re-validates."""
    current = formula
    improved = True
    while improved:
        improved = False
        for i in range(len(current.clauses)):
            candidate = CnfFormula(
                current.num_vars,
                [list(c) for k, c in enumerate(current.clauses) if k != i],
            )
            if check(candidate):
                current = candidate
                improved = True
                break
        if improved:
            continue
        for ci in range(len(current.clauses)):
            for li in range(len(current.clauses[ci])):
                clauses = [list(c) for c in current.clauses]
                del clauses[ci][li]
                candidate = CnfFormula(current.num_vars, clauses)
                if check(candidate):
                    current = candidate
                    improved = True
                    break
            if improved:
                break
    dense, _ = restrict_to_used(current)
    if dense.num_vars != current.num_vars and check(dense):
        current = dense
    return current


def _adjudicate(
    labeled_formulas: Iterable[Tuple[str, CnfFormula]],
    *,
    config: dict,
    invariant_checks: bool = True,
    count_ops: bool = True,
    minimize: bool = True,
    brute_limit: int = BRUTE_VAR_LIMIT,
    dpll_budget: int = DEFAULT_DPLL_BUDGET,
    shortcut: bool = False,
) -> DifferentialReport:
    agreements = 0
    disagreements: List[dict] = []
    gate_failures = 0
    engine_errors: List[dict] = []
    unknown = 0
    generated = 0
    op_points: List[Tuple[int, int]] = []

    def engine_of(f: CnfFormula) -> Tuple[str, SolveRun]:
        run = solve_sat(
            f,
            count_ops=count_ops,
            invariant_checks=invariant_checks,
            shortcut=shortcut,
        )
        return _engine_status(run), run

    def oracle_of(f: CnfFormula) -> str:
        return oracle_status(f, brute_limit=brute_limit, dpll_budget=dpll_budget)

    for label, formula in labeled_formulas:
        generated += 1
        status, run = engine_of(formula)
        if count_ops:
            nnz = sum(len(c) for c in formula.clauses)
            op_points.append((nnz, run.ops.total))
        if status == "ERROR":
            gate_failures += 1
            engine_errors.append(
                {
                    "label": label,
                    "instance": emit_dimacs(formula),
                    "detail": run.verdict.detail,
                }
            )
            continue
        if status == "SAT" and not evaluate(formula, run.verdict.assignment):
            # the engine's internal gate should make this unreachable
            gate_failures += 1
            engine_errors.append(
                {
                    "label": label,
                    "instance": emit_dimacs(formula),
                    "detail": "external recheck: Sat assignment fails evaluate",
                }
            )
            continue
        oracle = oracle_of(formula)
        if oracle == "UNKNOWN":
            unknown += 1
            continue
        if oracle == status:
            agreements += 1
            continue

        record = {
            "label": label,
            "instance": emit_dimacs(formula),
            "engine": status,
            "oracle": oracle,
        }
        if minimize:
            def still_disagrees(f: CnfFormula) -> bool:
                st, _ = engine_of(f)
                if st != status:
                    return False
                return oracle_of(f) == oracle

            minimized = shrink_disagreement(formula, still_disagrees)
            record["minimized"] = emit_dimacs(minimized)
        disagreements.append(record)

    total = agreements + len(disagreements) + gate_failures
    return DifferentialReport(
        config=config,
        generated=generated,
        total=total,
        agreements=agreements,
        disagreements=disagreements,
        gate_failures=gate_failures,
        engine_errors=engine_errors,
        unknown=unknown,
        op_stats=_op_stats(op_points),
    )


def differential_run(
    cfg: FuzzConfig,
    *,
    invariant_checks: bool = True,
    count_ops: bool = True,
    minimize: bool = True,
    brute_limit: int = BRUTE_VAR_LIMIT,
    dpll_budget: int = DEFAULT_DPLL_BUDGET,
    shortcut: bool = False,
) -> DifferentialReport:
    """Engine vs oracle over the seeded corpus described by ``cfg``."""

    def corpus():
        for index in range(cfg.num_instances):
            yield f"seed-{cfg.seed}-{index}", random_cnf(cfg, index)

    return _adjudicate(
        corpus(),
        config={"mode": "fuzz", **cfg.as_dict()},
        invariant_checks=invariant_checks,
        count_ops=count_ops,
        minimize=minimize,
        brute_limit=brute_limit,
        dpll_budget=dpll_budget,
        shortcut=shortcut,
    )


def exhaustive_reduction_check(max_n: int = 3, max_m: int = 4, max_width: int = 3) -> bool:
    """Oracle-vs-oracle equivalence over the full bounded formula space.

    For every formula: exhaustive satisfiability must equal exhaustive
    covering existence of the reduced pair, and a covering witness must map
    to a satisfying assignment.  True iff there are no mismatches.
    """
    if max_n > 4:
        raise ValueError(f"exhaustive_reduction_check refuses max_n={max_n} > 4")
    for formula in enumerate_formulas(max_n, max_m, max_width):
        sat, _ = brute_sat(formula)
        sub, used = restrict_to_used(formula)
        pair = to_decomposition(to_matrix(sub))
        covered, swaps = brute_covering(pair)
        if sat != covered:
            return False
        if covered:
            true_vars = {used[r - 1] for r in swaps}
            assignment = tuple(
                v in true_vars for v in range(1, formula.num_vars + 1)
            )
            if not evaluate(formula, assignment):
                return False
    return True


def diff_exhaustive(
    max_n: int = 3,
    max_m: int = 4,
    max_width: int = 3,
    *,
    invariant_checks: bool = True,
    count_ops: bool = True,
    minimize: bool = True,
    shortcut: bool = False,
) -> DifferentialReport:
    """Engine vs brute force over the full bounded formula space."""

    def corpus():
        for i, formula in enumerate(enumerate_formulas(max_n, max_m, max_width)):
            yield f"exhaustive-{i}", formula

    report = _adjudicate(
        corpus(),
        config={
            "mode": "exhaustive",
            "max_n": max_n,
            "max_m": max_m,
            "max_width": max_width,
        },
        invariant_checks=invariant_checks,
        count_ops=count_ops,
        minimize=minimize,
        shortcut=shortcut,
    )
    report.extra["reduction_check_passed"] = exhaustive_reduction_check(
        max_n, max_m, max_width
    )
    return report


# ---------------------------------------------------------------------------
# the operation-growth probe
# ---------------------------------------------------------------------------

def probe_shape(target_length: int, width: int = 3) -> Tuple[int, int]:
    """Instance shape for a target total literal count: (num_vars, num_clauses).

    Variables grow like the square root of the target so the dense matrices
    stay small while the clause count carries the growth.
    """
    n = max(width, round(math.sqrt(target_length)))
    m = max(1, round(target_length / width))
    return n, m


def complexity_probe(
    sizes: List[int],
    *,
    seed: int = 2024,
    instances_per_size: int = 2,
    width: int = 3,
    invariant_checks: bool = False,
) -> dict:
    """Solve planted instances of increasing total length, counting operations.

    Reports one row per instance plus the fitted log-log exponent and the
    maximum op_total / N^3 ratio.  This measures and reports; it asserts
    nothing about the growth.
    """
    rows: List[dict] = []
    for target in sizes:
        n, m = probe_shape(int(target), width)
        cfg = FuzzConfig(
            seed=seed,
            num_instances=instances_per_size,
            var_range=(n, n),
            clause_range=(m, m),
            width_range=(width, width),
            satisfiable_bias="planted",
        )
        for index in range(instances_per_size):
            formula = random_cnf(cfg, index)
            start = time.perf_counter()
            run = solve_sat(formula, count_ops=True, invariant_checks=invariant_checks)
            elapsed_ms = (time.perf_counter() - start) * 1000.0
            nnz = sum(len(c) for c in formula.clauses)
            rows.append(
                {
                    "target": int(target),
                    "input_length": nnz,
                    "n": formula.num_vars,
                    "m": len(formula.clauses),
                    "verdict": _engine_status(run),
                    "op_total": run.ops.total,
                    "extensions": run.extensions,
                    "elapsed_ms": round(elapsed_ms, 3),
                }
            )
    stats = _op_stats([(row["input_length"], row["op_total"]) for row in rows])
    gate_failures = sum(1 for row in rows if row["verdict"] == "ERROR")
    return {
        "mode": "probe",
        "seed": seed,
        "sizes": [int(s) for s in sizes],
        "instances_per_size": instances_per_size,
        "width": width,
        "rows": rows,
        "op_stats": stats,
        "gate_failures": gate_failures,
    }
