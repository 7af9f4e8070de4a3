"""Driver loop, SAT wrapper, verdict gating, and report building."""
import json

import pytest
from hypothesis import given, settings

from satcover import (
    CnfFormula,
    CoveringFound,
    EngineError,
    NoCovering,
    Reason,
    Sat,
    Unsat,
    build_covering_report,
    build_sat_report,
    evaluate,
    parse_dimacs,
    report_json,
    solve_covering,
    solve_sat,
)
from satcover import solver as solver_mod

from conftest import formula_of, formulas, naive_sat, pair_of, seeded_corpus


class TestCoveringDriver:
    def test_e1_found(self, e1_pair):
        run = solve_covering(e1_pair)
        assert run.verdict == CoveringFound(frozenset({1, 2}))
        assert run.extensions == 0

    def test_e2_non_removable(self, e2_pair):
        run = solve_covering(e2_pair)
        assert run.verdict == NoCovering(Reason("non-removable-useless-vertex", 1))

    def test_e3_unreachable(self, e3_pair):
        run = solve_covering(e3_pair)
        assert run.verdict == NoCovering(Reason("unreachable-column", 1))

    def test_covering_already(self):
        pair = pair_of("p cnf 2 2\n-1 -2 0\n-1 0\n")
        run = solve_covering(pair)
        assert run.verdict == CoveringFound(frozenset())

    def test_invalid_pair_rejected(self):
        import numpy as np

        from satcover import DecompositionPair, StructuralError

        pair = DecompositionPair(
            sm_alpha=np.array([[1, 0]], dtype=np.uint8),
            sm_alpha_bar=np.array([[1, 0]], dtype=np.uint8),
        )
        with pytest.raises(StructuralError):
            solve_covering(pair)

    def test_shortcut_changes_reason_not_verdict(self, e2_pair):
        plain = solve_covering(e2_pair)
        quick = solve_covering(e2_pair, shortcut=True)
        assert isinstance(plain.verdict, NoCovering)
        assert quick.verdict == NoCovering(Reason("both-components-single", 1))

    def test_extension_loop(self):
        pair = pair_of("p cnf 3 3\n1 0\n2 0\n-1 -2 3 0\n")
        run = solve_covering(pair)
        assert run.verdict == CoveringFound(frozenset({1, 2, 3}))
        assert run.extensions == 1

    def test_verdict_event_closes_trace(self, e1_pair, e3_pair):
        for pair in (e1_pair, e3_pair):
            run = solve_covering(pair)
            assert run.trace.kinds()[-1] == "verdict"


class TestSolveSat:
    def test_e1(self, e1):
        run = solve_sat(e1)
        assert run.verdict == Sat((True, True))

    def test_e2(self, e2):
        run = solve_sat(e2)
        assert run.verdict == Unsat(Reason("non-removable-useless-vertex", 1))

    def test_e3(self, e3):
        run = solve_sat(e3)
        assert run.verdict == Unsat(Reason("unreachable-column", 1))

    def test_e4_extension(self, e4):
        run = solve_sat(e4)
        assert run.verdict == Sat((True, True, True))
        assert run.extensions == 1

    def test_empty_clause_short_circuit(self):
        formula, _ = parse_dimacs("p cnf 2 2\n1 0\n0\n")
        run = solve_sat(formula)
        assert run.verdict == Unsat(Reason("empty-clause", 2))

    def test_empty_clause_with_labels(self):
        formula, _ = parse_dimacs("p cnf 2 2\n1 0\n0\n")
        run = solve_sat(formula, clause_labels=[7, 9])
        assert run.verdict == Unsat(Reason("empty-clause", 9))

    def test_no_clauses_trivially_sat(self):
        run = solve_sat(CnfFormula(3, []))
        assert run.verdict == Sat((False, False, False))

    def test_unused_variables_default_false(self):
        formula = CnfFormula(4, [[2]])
        run = solve_sat(formula)
        assert isinstance(run.verdict, Sat)
        assert run.verdict.assignment == (False, True, False, False)

    def test_reason_index_translated_to_original_variable(self):
        # the conflict lives on variable 2; variables 1 and 3 are padding
        formula = CnfFormula(3, [[2], [-2]])
        run = solve_sat(formula)
        assert run.verdict == Unsat(Reason("non-removable-useless-vertex", 2))

    def test_unreachable_index_is_clause_position(self):
        formula = CnfFormula(2, [[-1, -2], [1], [2]])
        run = solve_sat(formula)
        assert run.verdict == Unsat(Reason("unreachable-column", 1))

    def test_unreachable_index_respects_labels(self):
        formula = CnfFormula(2, [[-1, -2], [1], [2]])
        run = solve_sat(formula, clause_labels=[4, 5, 6])
        assert run.verdict == Unsat(Reason("unreachable-column", 4))

    def test_pos_orientation_agrees(self, e1, e2, e3, e4):
        for formula in (e1, e2, e3, e4):
            neg = solve_sat(formula)
            pos = solve_sat(formula, alpha="pos")
            assert isinstance(pos.verdict, type(neg.verdict))
            if isinstance(pos.verdict, Sat):
                assert evaluate(formula, pos.verdict.assignment)

    def test_shortcut_verdict_equality_on_corpus(self):
        for formula in seeded_corpus(401, 150):
            plain = solve_sat(formula)
            quick = solve_sat(formula, shortcut=True)
            assert type(plain.verdict) is type(quick.verdict), formula

    @given(formulas())
    @settings(max_examples=80, deadline=None)
    def test_sat_assignments_always_evaluate(self, formula):
        run = solve_sat(formula, invariant_checks=True)
        if isinstance(run.verdict, Sat):
            assert evaluate(formula, run.verdict.assignment)
        assert not isinstance(run.verdict, EngineError)

    @given(formulas(max_vars=4, max_clauses=5))
    @settings(max_examples=60, deadline=None)
    def test_never_claims_sat_on_unsatisfiable(self, formula):
        run = solve_sat(formula)
        if isinstance(run.verdict, Sat):
            assert naive_sat(formula)


class TestGateDowngrades:
    def test_failed_evaluation_becomes_engine_error(self, e1, monkeypatch):
        monkeypatch.setattr(solver_mod, "evaluate", lambda f, a: False)
        run = solver_mod.solve_sat(e1)
        assert isinstance(run.verdict, EngineError)
        assert "non-satisfying" in run.verdict.detail

    def test_invariant_error_becomes_engine_error(self, e1, monkeypatch):
        def broken(pair):
            return False

        monkeypatch.setattr(solver_mod, "is_alpha_covering", broken)
        run = solver_mod.solve_sat(e1)
        assert isinstance(run.verdict, EngineError)

    def test_solve_covering_raises_on_invariant_breakage(self, e1_pair, monkeypatch):
        monkeypatch.setattr(solver_mod, "is_alpha_covering", lambda pair: False)
        with pytest.raises(solver_mod.EngineInvariantError):
            solve_covering(e1_pair)


class TestReports:
    EXPECTED_KEYS = {
        "instance",
        "verdict",
        "assignment",
        "reason",
        "n",
        "m",
        "input_length",
        "op_total",
        "op_by_kind",
        "extensions",
        "elapsed_ms",
        "trace_hash",
    }

    def test_sat_report_schema(self, e1):
        run = solve_sat(e1, count_ops=True)
        report = build_sat_report("e1", e1, run, elapsed_ms=1.0)
        assert set(report) == self.EXPECTED_KEYS
        assert report["verdict"] == "SAT"
        assert report["assignment"] == [1, 2]
        assert report["reason"] is None
        assert report["n"] == 2
        assert report["m"] == 2
        assert report["input_length"] == 3
        assert report["op_total"] == run.ops.total > 0
        assert len(report["trace_hash"]) == 64

    def test_unsat_report(self, e3):
        run = solve_sat(e3)
        report = build_sat_report("e3", e3, run, elapsed_ms=None)
        assert report["verdict"] == "UNSAT"
        assert report["assignment"] is None
        assert report["reason"] == {"kind": "unreachable-column", "index": 1}

    def test_error_report_carries_detail(self, e1, monkeypatch):
        monkeypatch.setattr(solver_mod, "evaluate", lambda f, a: False)
        run = solver_mod.solve_sat(e1)
        report = build_sat_report("e1", e1, run)
        assert report["verdict"] == "ERROR"
        assert "error_detail" in report

    def test_covering_report(self, e1_pair):
        run = solve_covering(e1_pair, count_ops=True)
        report = build_covering_report("e1", e1_pair, run, elapsed_ms=0.5)
        assert report["verdict"] == "COVERING"
        assert report["swaps"] == [1, 2]
        assert report["input_length"] == 3

    def test_report_json_is_canonical(self, e1):
        run = solve_sat(e1, count_ops=True)
        report = build_sat_report("e1", e1, run, elapsed_ms=None)
        text = report_json(report)
        assert json.loads(text) == report
        assert text.index('"assignment"') < text.index('"verdict"')  # sorted keys

    def test_determinism_modulo_elapsed(self, e1, e2, e3, e4):
        for formula in (e1, e2, e3, e4):
            first = build_sat_report("x", formula, solve_sat(formula, count_ops=True))
            second = build_sat_report("x", formula, solve_sat(formula, count_ops=True))
            first.pop("elapsed_ms")
            second.pop("elapsed_ms")
            assert report_json(first) == report_json(second)


class TestReasonType:
    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            Reason("made-up-reason", 1)

    def test_as_dict(self):
        assert Reason("empty-clause", 3).as_dict() == {
            "kind": "empty-clause",
            "index": 3,
        }
