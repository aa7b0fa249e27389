from __future__ import annotations

import pytest

from kbdebug.lang import parse_kb, parse_statement
from kbdebug.reasoning import (
    Dpi,
    InadmissibleDpiError,
    TestCase,
    dpi_from_dict,
    entails,
    is_coherent,
    is_consistent,
    load_dpi,
    unsatisfiable_concepts,
)

from conftest import fixture_dict, fixture_path, load_fixture


def stmts(*texts):
    return [parse_statement(t) for t in texts]


class TestConsistency:
    def test_chain_with_background_is_inconsistent(self, chain):
        all_axioms = list(chain.kb) + list(chain.background)
        assert is_consistent(all_axioms) is False

    def test_dropping_any_chain_axiom_restores_consistency(self, chain):
        bg = [ax.statement for ax in chain.background]
        for skip in range(4):
            kept = [ax.statement for i, ax in enumerate(chain.kb) if i != skip]
            assert is_consistent(kept + bg) is True

    def test_empty_kb_is_consistent(self):
        assert is_consistent([]) is True

    def test_forcing_everything_into_an_empty_concept(self):
        # a pure-TBox contradiction must not be satisfiable by an empty domain
        assert is_consistent(stmts("top sub A", "top sub (not A)")) is False


class TestEntailment:
    def test_chain_propagates_assertions(self, chain):
        kept = [ax.statement for ax in chain.kb] + \
               [ax.statement for ax in chain.background]
        assert entails(kept, stmts("B(w)"))
        assert entails(kept, stmts("D(w)"))

    def test_no_entailment_without_premise(self):
        assert not entails(stmts("A sub B"), stmts("B(w)"))

    def test_subsumption_entailment_is_about_arbitrary_individuals(self):
        kb = stmts("A sub B", "B sub C")
        assert entails(kb, stmts("A sub C"))
        assert not entails(kb, stmts("C sub A"))

    def test_everyone_is_a_researcher(self, intro):
        # the two sentence-forms about writing force the concept to cover
        # the whole domain
        kb = [ax.statement for ax in intro.kb[:2]]
        assert entails(kb, stmts("top sub res"))
        assert entails(kb + stmts("secr sub gen"), stmts("secr sub res"))

    def test_empty_query_is_trivially_entailed(self):
        assert entails(stmts("A sub B"), [])

    def test_conjunction_semantics(self, chain):
        kept = [ax.statement for ax in chain.kb] + \
               [ax.statement for ax in chain.background]
        # all formulas must be entailed, one failing member breaks it
        assert entails(kept, stmts("B(w)", "C(w)"))
        assert not entails(kept[1:], stmts("B(w)", "C(w)"))


class TestCoherence:
    def test_incoherent_intro_terminology(self, intro_incoherent):
        axioms = [ax.statement for ax in intro_incoherent.kb]
        assert is_coherent(axioms) is False
        assert unsatisfiable_concepts(axioms) == ["gen", "secr"]

    def test_team_terminology_is_incoherent_but_consistent(self, team):
        axioms = [ax.statement for ax in team.kb]
        assert is_consistent(axioms) is True
        assert is_coherent(axioms) is False

    def test_coherent_after_removing_one_axiom(self, team):
        axioms = [ax.statement for ax in team.kb if ax.id != 4]
        assert is_coherent(axioms) is True


class TestCheckValidity:
    def test_full_kb_report(self, chain):
        report = chain.check_validity()
        assert report.consistent is False
        assert report.valid is False

    def test_removing_a_diagnosis_yields_valid(self, chain):
        report = chain.check_validity(removed={1})
        assert report.consistent is True
        assert report.valid is True

    def test_negative_test_violation_is_reported(self, partdx):
        report = partdx.check_validity(removed={3})
        # keeping the subclass chain entails the forbidden assertion
        assert report.consistent is True
        assert report.violated_negative_tests == (0,)
        assert report.valid is False

    def test_partdx_diagnosis_passes_all_checks(self, partdx):
        report = partdx.check_validity(removed={3, 4})
        assert report.valid is True

    def test_coherence_reported_when_required(self, team):
        # the membership chain contradicts the non-membership chain
        report = team.check_validity()
        assert report.consistent is False
        assert report.coherent is False
        assert report.valid is False
        report2 = team.check_validity(removed={4})
        assert report2.consistent is True
        assert report2.coherent is True
        assert report2.valid is True


class TestAdmissibility:
    def test_admissible_fixture(self, partdx):
        partdx.ensure_admissible()  # does not raise

    def test_background_conflict_is_inadmissible(self):
        dpi = dpi_from_dict({
            "kb": ["A sub B"],
            "background": ["C(w)", "clause !C(w)"],
        })
        with pytest.raises(InadmissibleDpiError):
            dpi.ensure_admissible()

    def test_unreachable_positive_test_is_inadmissible(self):
        dpi = dpi_from_dict({
            "kb": ["A sub B"],
            "background": ["clause !C(w)"],
            "positive_tests": [["C(w)"]],
        })
        with pytest.raises(InadmissibleDpiError):
            dpi.ensure_admissible()


class TestSerializationRoundTrip:
    @pytest.mark.parametrize("name", [
        "example_chain", "example_layered", "example_partdx",
        "example_team", "example_intro",
    ])
    def test_round_trip(self, name):
        dpi = load_fixture(name)
        again = dpi_from_dict(dpi.to_dict())
        assert [ax.text for ax in again.kb] == [ax.text for ax in dpi.kb]
        assert again.requirements == dpi.requirements
        assert again.entailment_kinds == dpi.entailment_kinds
        assert again.fault_model == dpi.fault_model

    def test_kb_accepts_multiline_string(self):
        dpi = dpi_from_dict({"kb": "A sub B\n# comment\nB sub C"})
        assert [ax.text for ax in dpi.kb] == ["A sub B", "B sub C"]

    def test_positive_tests_parse_as_formula_lists(self, partdx):
        assert partdx.positive_tests[0].texts == ("d(v)",)
        assert partdx.negative_tests[0].texts == ("e(w)",)


class TestValidityMemo:
    def test_cache_hits_are_consistent(self, partdx):
        first = partdx.valid_without({3, 4})
        second = partdx.valid_without({3, 4})
        assert first is second is True
        assert partdx.valid_kept(partdx.kb_ids - {3, 4}) is True
