"""Shared fixtures: canonical worked instances, naive cross-check helpers,
and hypothesis strategies.

The four canonical instances exercise every driver exit:
  E1 satisfiable through the plain construct/clean path,
  E2 unsatisfiable through a non-removable useless vertex,
  E3 unsatisfiable through an unreachable stuck column,
  E4 satisfiable only after a graph extension.
"""
from __future__ import annotations

import itertools
from typing import List, Tuple

import numpy as np
import pytest
from hypothesis import strategies as st

from satcover import (
    CnfFormula,
    DecompositionPair,
    FuzzConfig,
    parse_dimacs,
    random_cnf,
    to_decomposition,
    to_matrix,
)

E1_TEXT = "p cnf 2 2\n-1 2 0\n1 0\n"
E2_TEXT = "p cnf 1 2\n1 0\n-1 0\n"
E3_TEXT = "p cnf 2 3\n-1 -2 0\n1 0\n2 0\n"
E4_TEXT = "p cnf 3 3\n1 0\n2 0\n-1 -2 3 0\n"


def formula_of(text: str) -> CnfFormula:
    formula, _ = parse_dimacs(text)
    return formula


def pair_of(text: str) -> DecompositionPair:
    return to_decomposition(to_matrix(formula_of(text)))


@pytest.fixture
def e1() -> CnfFormula:
    return formula_of(E1_TEXT)


@pytest.fixture
def e2() -> CnfFormula:
    return formula_of(E2_TEXT)


@pytest.fixture
def e3() -> CnfFormula:
    return formula_of(E3_TEXT)


@pytest.fixture
def e4() -> CnfFormula:
    return formula_of(E4_TEXT)


@pytest.fixture
def e1_pair() -> DecompositionPair:
    return pair_of(E1_TEXT)


@pytest.fixture
def e2_pair() -> DecompositionPair:
    return pair_of(E2_TEXT)


@pytest.fixture
def e3_pair() -> DecompositionPair:
    return pair_of(E3_TEXT)


# ---------------------------------------------------------------------------
# naive reference computations (independent of the library internals)
# ---------------------------------------------------------------------------

def naive_column_counts(pair: DecompositionPair) -> Tuple[List[int], List[int]]:
    a = [sum(int(pair.sm_alpha[i, j]) for i in range(pair.n)) for j in range(pair.m)]
    b = [sum(int(pair.sm_alpha_bar[i, j]) for i in range(pair.n)) for j in range(pair.m)]
    return a, b


def naive_is_covering(pair: DecompositionPair, swaps) -> bool:
    for j in range(pair.m):
        hit = False
        for i in range(pair.n):
            row = pair.sm_alpha_bar if (i + 1) in swaps else pair.sm_alpha
            if row[i, j]:
                hit = True
                break
        if not hit:
            return False
    return True


def naive_covering_exists(pair: DecompositionPair) -> bool:
    for bits in itertools.product((False, True), repeat=pair.n):
        swaps = {i + 1 for i in range(pair.n) if bits[i]}
        if naive_is_covering(pair, swaps):
            return True
    return False


def naive_input_length(pair: DecompositionPair) -> int:
    return int(pair.sm_alpha.sum()) + int(pair.sm_alpha_bar.sum())


def naive_sat(formula: CnfFormula) -> bool:
    if any(not clause for clause in formula.clauses):
        return False
    for bits in itertools.product((False, True), repeat=formula.num_vars):
        ok = True
        for clause in formula.clauses:
            if not any((lit > 0) == bits[abs(lit) - 1] for lit in clause):
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# hypothesis strategies
# ---------------------------------------------------------------------------

@st.composite
def clauses_strategy(draw, num_vars: int, max_clauses: int = 8, max_width: int = 3):
    m = draw(st.integers(1, max_clauses))
    clauses = []
    for _ in range(m):
        width = draw(st.integers(1, min(max_width, num_vars)))
        variables = draw(
            st.lists(
                st.integers(1, num_vars),
                min_size=width,
                max_size=width,
                unique=True,
            )
        )
        signs = draw(st.lists(st.booleans(), min_size=width, max_size=width))
        clauses.append([v if s else -v for v, s in zip(variables, signs)])
    return clauses


@st.composite
def formulas(draw, max_vars: int = 6, max_clauses: int = 8, max_width: int = 3):
    """Preprocessed-shape formulas: no duplicate variables inside a clause."""
    n = draw(st.integers(1, max_vars))
    return CnfFormula(n, draw(clauses_strategy(n, max_clauses, max_width)))


@st.composite
def decomposition_pairs(draw, max_rows: int = 6, max_cols: int = 6):
    """Valid pairs built cellwise, then repaired to meet every condition."""
    n = draw(st.integers(1, max_rows))
    m = draw(st.integers(1, max_cols))
    cells = draw(
        st.lists(st.integers(0, 2), min_size=n * m, max_size=n * m)
    )
    alpha = np.zeros((n, m), dtype=np.uint8)
    bar = np.zeros((n, m), dtype=np.uint8)
    for i in range(n):
        for j in range(m):
            value = cells[i * m + j]
            if value == 1:
                alpha[i, j] = 1
            elif value == 2:
                bar[i, j] = 1
    # repair: every row pair nonempty
    for i in range(n):
        if not alpha[i].any() and not bar[i].any():
            j = draw(st.integers(0, m - 1))
            side = draw(st.booleans())
            (alpha if side else bar)[i, j] = 1
    # repair: every column covered
    for j in range(m):
        if not alpha[:, j].any() and not bar[:, j].any():
            i = draw(st.integers(0, n - 1))
            side = draw(st.booleans())
            (alpha if side else bar)[i, j] = 1
    return DecompositionPair(sm_alpha=alpha, sm_alpha_bar=bar)


def seeded_corpus(seed: int, count: int, **overrides) -> List[CnfFormula]:
    params = {
        "var_range": (1, 10),
        "clause_range": (1, 25),
        "width_range": (1, 3),
    }
    params.update(overrides)
    cfg = FuzzConfig(seed=seed, num_instances=count, **params)
    return [random_cnf(cfg, i) for i in range(count)]


# ---------------------------------------------------------------------------
# acceptance summary lines
# ---------------------------------------------------------------------------

ACCEPTANCE_RESULTS: List[Tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, note: str) -> None:
    ACCEPTANCE_RESULTS.append((name, passed, note))
    print(f"{name}: {'PASS' if passed else 'FAIL'} - {note}")
    assert passed, f"{name}: {note}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, note in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(
            f"{name}: {'PASS' if passed else 'FAIL'} - {note}"
        )
