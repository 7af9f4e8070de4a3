"""CNF frontend: DIMACS parsing, the signed clause matrix, and the reduction.

A formula with n variables and m clauses becomes an m x n matrix with entries
in {-1, 0, +1} (one row per clause, one column per variable).  The reduction
to a decomposition pair puts, for each variable, the clauses holding its
negative literal on the alpha side and the clauses holding its positive
literal on the other side; a row swap then corresponds to assigning the
variable true.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .decomposition import DecompositionPair, StructuralError

Clause = List[int]
Assignment = Tuple[bool, ...]


class ParseError(ValueError):
    """DIMACS syntax or consistency error, carrying the offending line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class CnfFormula:
    """A CNF formula as a clause list over variables 1..num_vars.

    Clauses are kept exactly as preprocessing left them; an empty clause is
    retained (it makes the formula unsatisfiable) so every consumer sees the
    same semantics.
    """

    num_vars: int
    clauses: List[Clause]

    def __post_init__(self):
        for idx, clause in enumerate(self.clauses, start=1):
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise StructuralError(
                        f"clause {idx}: literal {lit} outside +/-1..{self.num_vars}"
                    )


@dataclass(frozen=True)
class PreprocessReport:
    """What parsing normalized away, in original 1-based clause numbering."""

    removed_tautologies: tuple
    deduped_literals: int
    unused_variables: tuple
    empty_clause_found: bool


@dataclass
class CnfMatrix:
    """Signed clause/variable matrix: m rows (clauses) x n columns (variables)."""

    m: int
    n: int
    entries: np.ndarray  # int8, entries in {-1, 0, +1}

    def __post_init__(self):
        arr = np.ascontiguousarray(self.entries, dtype=np.int8)
        if arr.shape != (self.m, self.n):
            raise StructuralError(
                f"matrix shape {arr.shape} does not match m={self.m}, n={self.n}"
            )
        if arr.size and not np.isin(arr, (-1, 0, 1)).all():
            raise StructuralError("matrix entries must be -1, 0, or +1")
        arr.setflags(write=False)
        self.entries = arr

    def nonzero_count(self) -> int:
        return int(np.count_nonzero(self.entries))


# ---------------------------------------------------------------------------
# parsing and emission
# ---------------------------------------------------------------------------

def _preprocess_clause(raw: Clause) -> Tuple[Optional[Clause], int]:
    """Dedupe literals and drop tautologies.

    Returns (clause or None if tautological, number of duplicate literals
    removed).  Literal order of first occurrence is preserved.
    """
    seen = set()
    out: Clause = []
    removed = 0
    for lit in raw:
        if lit in seen:
            removed += 1
            continue
        seen.add(lit)
        out.append(lit)
    for lit in out:
        if -lit in seen:
            return None, removed
    return out, removed


def parse_dimacs(text: str) -> Tuple[CnfFormula, PreprocessReport]:
    """Parse DIMACS CNF text into a preprocessed formula plus a report.

    Comment lines start with 'c'; the header is ``p cnf <vars> <clauses>``;
    clauses are 0-terminated integer runs (the final terminator and newline
    are optional).  Errors carry 1-based line numbers.
    """
    num_vars = None
    declared_clauses = None
    header_line = 0
    tokens: List[Tuple[int, int]] = []  # (literal, line)
    last_line = 1
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        last_line = lineno
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("p"):
            if num_vars is not None:
                raise ParseError("duplicate header", lineno)
            parts = stripped.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise ParseError(f"malformed header {stripped!r}", lineno)
            try:
                num_vars = int(parts[2])
                declared_clauses = int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {stripped!r}", lineno) from None
            if num_vars < 0 or declared_clauses < 0:
                raise ParseError("header counts must be non-negative", lineno)
            header_line = lineno
            continue
        if num_vars is None:
            raise ParseError("clause data before header", lineno)
        for tok in stripped.split():
            try:
                val = int(tok)
            except ValueError:
                raise ParseError(f"non-integer token {tok!r}", lineno) from None
            tokens.append((val, lineno))
    if num_vars is None:
        raise ParseError("missing 'p cnf' header", header_line or last_line)

    raw_clauses: List[Clause] = []
    current: Clause = []
    for val, lineno in tokens:
        if val == 0:
            raw_clauses.append(current)
            current = []
            continue
        if abs(val) > num_vars:
            raise ParseError(f"literal {val} outside declared range 1..{num_vars}", lineno)
        current.append(val)
    if current:
        raw_clauses.append(current)  # unterminated final clause
    if len(raw_clauses) != declared_clauses:
        raise ParseError(
            f"header declares {declared_clauses} clauses, found {len(raw_clauses)}",
            last_line,
        )

    clauses: List[Clause] = []
    removed_tautologies: List[int] = []
    deduped = 0
    empty_found = False
    for idx, raw in enumerate(raw_clauses, start=1):
        clause, removed = _preprocess_clause(raw)
        deduped += removed
        if clause is None:
            removed_tautologies.append(idx)
            continue
        if not clause:
            empty_found = True
        clauses.append(clause)

    formula = CnfFormula(num_vars=num_vars, clauses=clauses)
    report = PreprocessReport(
        removed_tautologies=tuple(removed_tautologies),
        deduped_literals=deduped,
        unused_variables=tuple(unused_variables(formula)),
        empty_clause_found=empty_found,
    )
    return formula, report


def _canonical_clause(clause: Clause) -> Clause:
    return sorted(clause, key=lambda lit: (abs(lit), lit < 0))


def emit_dimacs(formula: CnfFormula) -> str:
    """Serialize to canonical DIMACS (sorted literals, one clause per line)."""
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    for clause in formula.clauses:
        lits = _canonical_clause(clause)
        lines.append(" ".join(str(l) for l in lits + [0]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# variable bookkeeping
# ---------------------------------------------------------------------------

def used_variables(formula: CnfFormula) -> List[int]:
    """Variables occurring in at least one clause, ascending."""
    present = set()
    for clause in formula.clauses:
        for lit in clause:
            present.add(abs(lit))
    return sorted(present)


def unused_variables(formula: CnfFormula) -> List[int]:
    present = set(used_variables(formula))
    return [v for v in range(1, formula.num_vars + 1) if v not in present]


def restrict_to_used(formula: CnfFormula) -> Tuple[CnfFormula, List[int]]:
    """Renumber onto the used variables only.

    Returns the renumbered formula and the ascending list mapping new index
    position -> original variable (1-based on both sides).
    """
    used = used_variables(formula)
    remap = {v: k for k, v in enumerate(used, start=1)}
    clauses = [
        [int(np.sign(lit)) * remap[abs(lit)] for lit in clause]
        for clause in formula.clauses
    ]
    return CnfFormula(num_vars=len(used), clauses=clauses), used


# ---------------------------------------------------------------------------
# the reduction
# ---------------------------------------------------------------------------

def to_matrix(formula: CnfFormula) -> CnfMatrix:
    """Build the m x n signed matrix; entry (j, i) is the sign of x_i in clause j."""
    m = len(formula.clauses)
    n = formula.num_vars
    entries = np.zeros((m, n), dtype=np.int8)
    for j, clause in enumerate(formula.clauses):
        for lit in clause:
            entries[j, abs(lit) - 1] = 1 if lit > 0 else -1
    return CnfMatrix(m=m, n=n, entries=entries)


def to_decomposition(matrix: CnfMatrix, *, alpha: str = "neg", ops=None) -> DecompositionPair:
    """Turn the signed matrix into a decomposition pair.

    With ``alpha="neg"`` (default) the alpha side of variable row i holds the
    clauses containing the negative literal of x_i; ``alpha="pos"`` mirrors
    the orientation.  Requires every clause row and variable column to be
    nonzero (empty clauses and unused variables must be handled upstream).
    """
    if alpha not in ("neg", "pos"):
        raise StructuralError(f"alpha must be 'neg' or 'pos', got {alpha!r}")
    entries = matrix.entries
    for j in np.nonzero(~entries.astype(bool).any(axis=1))[0]:
        raise StructuralError(f"clause {int(j) + 1} is empty (all-zero matrix row)")
    for i in np.nonzero(~entries.astype(bool).any(axis=0))[0]:
        raise StructuralError(f"variable {int(i) + 1} occurs in no clause")
    neg_side = (entries.T == -1).astype(np.uint8)  # n x m
    pos_side = (entries.T == 1).astype(np.uint8)
    if ops is not None:
        # classify each cell once, write both matrices
        ops.cmp(matrix.m * matrix.n)
        ops.assign(2 * matrix.m * matrix.n)
    if alpha == "neg":
        return DecompositionPair(neg_side, pos_side)
    return DecompositionPair(pos_side, neg_side)


def assignment_from_swaps(swaps, n: int) -> Assignment:
    """x_i is true exactly when row i was swapped."""
    swap_set = set(int(i) for i in swaps)
    for i in swap_set:
        if not 1 <= i <= n:
            raise StructuralError(f"swap index {i} outside 1..{n}")
    return tuple(i in swap_set for i in range(1, n + 1))


def evaluate(formula: CnfFormula, assignment: Sequence[bool]) -> bool:
    """Evaluate the formula under a total assignment (index i-1 holds x_i)."""
    if len(assignment) != formula.num_vars:
        raise StructuralError(
            f"assignment length {len(assignment)} != num_vars {formula.num_vars}"
        )
    for clause in formula.clauses:
        satisfied = False
        for lit in clause:
            value = assignment[abs(lit) - 1]
            if (lit > 0) == bool(value):
                satisfied = True
                break
        if not satisfied:
            return False
    return True
