"""satcover: a covering-search SAT engine with a verification harness.

The engine decides satisfiability by reducing a CNF formula to a pair of
binary matrices (a decomposition of the clause set into per-variable
positive/negative occurrence rows) and searching for a set of row swaps
that covers every clause column.  Every satisfiable verdict is gated by
direct evaluation; the harness differentially tests the engine against
brute-force oracles and measures operation-count growth.
"""
from .cnf import (
    CnfFormula,
    CnfMatrix,
    ParseError,
    PreprocessReport,
    assignment_from_swaps,
    emit_dimacs,
    evaluate,
    parse_dimacs,
    restrict_to_used,
    to_decomposition,
    to_matrix,
)
from .decomposition import (
    ColumnCounts,
    DecompositionPair,
    StructuralError,
    ValidationReport,
    Violation,
    apply_swaps,
    column_counts,
    input_length,
    is_alpha_covering,
    validate,
)
from .graph import PointingGraph, both_single_shortcut, construct, find_main_vertices
from .harness import (
    DifferentialReport,
    FuzzConfig,
    brute_covering,
    brute_sat,
    complexity_probe,
    diff_exhaustive,
    differential_run,
    dpll,
    enumerate_clause_universe,
    enumerate_formulas,
    exhaustive_reduction_check,
    random_cnf,
    shrink_disagreement,
)
from .instrument import DISABLED_OPS, NO_TRACE, OpCounter, Trace
from .procedures import (
    Eliminated,
    ExtensionPlan,
    IncompatibleSet,
    NeedsExtension,
    RemovalOutcome,
    StateSnapshot,
    Unreachable,
    clean,
    eliminate_incompatibilities,
    extend,
    find_incompatible_sets,
    removal_procedure,
)
from .solver import (
    CoveringFound,
    EngineError,
    EngineInvariantError,
    NoCovering,
    Reason,
    Sat,
    SolveRun,
    Unsat,
    build_covering_report,
    build_sat_report,
    report_json,
    solve_covering,
    solve_sat,
)

__version__ = "0.1.0"

__all__ = [
    "CnfFormula",
    "CnfMatrix",
    "ParseError",
    "PreprocessReport",
    "assignment_from_swaps",
    "emit_dimacs",
    "evaluate",
    "parse_dimacs",
    "restrict_to_used",
    "to_decomposition",
    "to_matrix",
    "ColumnCounts",
    "DecompositionPair",
    "StructuralError",
    "ValidationReport",
    "Violation",
    "apply_swaps",
    "column_counts",
    "input_length",
    "is_alpha_covering",
    "validate",
    "PointingGraph",
    "both_single_shortcut",
    "construct",
    "find_main_vertices",
    "DifferentialReport",
    "FuzzConfig",
    "brute_covering",
    "brute_sat",
    "complexity_probe",
    "diff_exhaustive",
    "differential_run",
    "dpll",
    "enumerate_clause_universe",
    "enumerate_formulas",
    "exhaustive_reduction_check",
    "random_cnf",
    "shrink_disagreement",
    "DISABLED_OPS",
    "NO_TRACE",
    "OpCounter",
    "Trace",
    "Eliminated",
    "ExtensionPlan",
    "IncompatibleSet",
    "NeedsExtension",
    "RemovalOutcome",
    "StateSnapshot",
    "Unreachable",
    "clean",
    "eliminate_incompatibilities",
    "extend",
    "find_incompatible_sets",
    "removal_procedure",
    "CoveringFound",
    "EngineError",
    "EngineInvariantError",
    "NoCovering",
    "Reason",
    "Sat",
    "SolveRun",
    "Unsat",
    "build_covering_report",
    "build_sat_report",
    "report_json",
    "solve_covering",
    "solve_sat",
    "__version__",
]
