"""Diagnosis problem instances and the reasoning services over them.

A problem instance bundles the debuggable KB axioms, trusted background
axioms, positive and negative test cases, and the requirements the repaired
KB must meet ("consistency", optionally "coherence"). Validity checks for
axiom subsets are memoised per instance: every engine (conflict search,
hitting-set trees, the direct engine, brute force) asks the same question —
"is this kept subset of the KB, together with background and positive tests,
consistent / coherent / free of negative-test entailments?" — so they share
one cache keyed by the kept id set.

All per-instance checks ground over one fixed domain (the named individuals
of the whole instance plus existential witnesses), which keeps the
"subset is faulty" predicate monotone and the cache sound.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from . import sat
from .grounding import Grounder, _disj, build_domain, witness_names
from .lang import (
    Axiom, ConceptAssertion, Disjointness, Equivalence, Statement,
    Subsumption, concept_names, individual_names, parse_kb, parse_statement,
    serialize_statement, syntax_counts,
)

Diagnosis = frozenset  # of axiom ids
ConflictSet = frozenset  # of axiom ids

REQUIREMENTS = ("consistency", "coherence")


def sorted_ids(s: Iterable[int]) -> list[int]:
    return sorted(s)


def id_key(s: Iterable[int]) -> tuple[int, ...]:
    """Lexicographic tie-break key: the sorted id sequence."""
    return tuple(sorted(s))


class InadmissibleDpiError(ValueError):
    """The background plus positive tests already violate the requirements,
    so no subset of the KB can be a diagnosis."""


# ---------------------------------------------------------------------------
# test cases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestCase:
    """A test case: a list of formulas treated as one unit."""

    __test__ = False  # keep pytest from collecting this as a test class

    formulas: tuple[Statement, ...]
    texts: tuple[str, ...]

    @staticmethod
    def parse(lines: Sequence[str]) -> "TestCase":
        stmts = tuple(parse_statement(t) for t in lines)
        return TestCase(stmts, tuple(serialize_statement(s) for s in stmts))

    def to_json(self) -> list[str]:
        return list(self.texts)


# ---------------------------------------------------------------------------
# validity report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidityReport:
    consistent: bool
    coherent: Optional[bool]  # None when coherence is not required
    unsatisfiable_concepts: tuple[str, ...]
    violated_negative_tests: tuple[int, ...]  # indices into dpi.negative_tests

    @property
    def valid(self) -> bool:
        return (self.consistent
                and self.coherent is not False
                and not self.violated_negative_tests)


# ---------------------------------------------------------------------------
# raw checks over statement lists
# ---------------------------------------------------------------------------

def _check_domain(statements: Sequence[Statement], witness_budget: int,
                  extra_names: Sequence[str] = ()) -> tuple[str, ...]:
    domain = build_domain(statements, witness_budget, extra_names)
    # interpretation domains are non-empty: a pure-TBox KB still has to be
    # satisfiable at some anonymous element
    return domain if domain else ("_e1",)


def is_consistent(axioms: Iterable[Union[Axiom, Statement]],
                  extra: Iterable[Statement] = (),
                  witness_budget: int = 1) -> bool:
    """Satisfiability of the statements (plus extras) over a bounded domain."""
    statements = [_statement_of(a) for a in axioms] + list(extra)
    g = Grounder(_check_domain(statements, witness_budget))
    for stmt in statements:
        g.assert_statement(stmt, "check")
    return sat.satisfiable(g.clauses)


def entails(axioms: Iterable[Union[Axiom, Statement]],
            formulas: Sequence[Statement],
            witness_budget: int = 1) -> bool:
    """Does the KB entail every formula in the list?

    Each formula is checked by refutation: assert the KB and the negated
    formula, over the KB domain extended with fresh witnesses for the
    negated quantified formula, and test unsatisfiability. Checking one
    formula at a time keeps the ground instances small and matches how
    per-diagnosis entailment sets are built.
    """
    statements = [_statement_of(a) for a in axioms]
    query = list(formulas)
    if not query:
        return True
    if len(query) > 1:
        return all(entails(statements, [f], witness_budget) for f in query)
    zs = _query_witnesses(query)
    domain = _check_domain(statements + query, witness_budget, zs)
    g = Grounder(domain)
    for stmt in statements:
        g.assert_statement(stmt, "kb")
    fresh = iter(zs)
    negation = _disj([g.negated_statement_formula(q, fresh) for q in query])
    g.assert_formula(negation, "query")
    return not sat.satisfiable(g.clauses)


def unsatisfiable_concepts(axioms: Iterable[Union[Axiom, Statement]],
                           witness_budget: int = 1) -> list[str]:
    """Named concepts that can have no instance under the KB."""
    statements = [_statement_of(a) for a in axioms]
    names: set[str] = set()
    for stmt in statements:
        names |= concept_names(stmt)
    bad = []
    for name in sorted(names):
        probe = ConceptAssertion(name, "_z0")
        if not is_consistent(statements, [probe], witness_budget):
            bad.append(name)
    return bad


def is_coherent(axioms: Iterable[Union[Axiom, Statement]],
                witness_budget: int = 1) -> bool:
    """Every named concept is satisfiable (has a possible instance)."""
    return not unsatisfiable_concepts(axioms, witness_budget)


def _statement_of(a: Union[Axiom, Statement]) -> Statement:
    return a.statement if isinstance(a, Axiom) else a


def _query_witnesses(formulas: Sequence[Statement]) -> list[str]:
    """Fresh constants for the negated query: first the per-formula witnesses
    consumed (in order) by negated_statement_formula, then domain slack for
    `all` occurrences, which become existentials under negation."""
    zs: list[str] = []
    i = 0
    for f in formulas:
        need = {Subsumption: 1, Disjointness: 1, Equivalence: 2}.get(type(f), 0)
        for _ in range(need):
            i += 1
            zs.append(f"_q{i}")
    slack = sum(syntax_counts(f).get("all", 0) for f in formulas)
    for _ in range(slack):
        i += 1
        zs.append(f"_q{i}")
    return zs


# ---------------------------------------------------------------------------
# the problem instance
# ---------------------------------------------------------------------------

@dataclass
class Dpi:
    """A diagnosis problem instance with a memoised validity oracle."""

    kb: tuple[Axiom, ...]
    background: tuple[Axiom, ...] = ()
    positive_tests: tuple[TestCase, ...] = ()
    negative_tests: tuple[TestCase, ...] = ()
    requirements: frozenset = frozenset({"consistency"})
    witness_budget: int = 1
    entailment_kinds: tuple[str, ...] = ("assertions", "subsumptions")
    fault_model: Optional[dict] = None  # raw model dict; consumed upstream

    _valid_cache: dict = field(default_factory=dict, repr=False, compare=False)
    _entails_cache: dict = field(default_factory=dict, repr=False, compare=False)
    _domain: Optional[tuple[str, ...]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        ids = [ax.id for ax in self.kb]
        if ids != list(range(1, len(ids) + 1)):
            raise ValueError("kb axiom ids must be 1..n in order")
        bad = set(self.requirements) - set(REQUIREMENTS)
        if bad:
            raise ValueError(f"unknown requirements: {sorted(bad)}")

    # -- structure ---------------------------------------------------------

    @property
    def kb_ids(self) -> frozenset:
        return frozenset(ax.id for ax in self.kb)

    def axiom(self, axiom_id: int) -> Axiom:
        return self.kb[axiom_id - 1]

    def axioms(self, ids: Iterable[int]) -> list[Axiom]:
        return [self.kb[i - 1] for i in sorted(ids)]

    @property
    def coherence_required(self) -> bool:
        return "coherence" in self.requirements

    def context_statements(self) -> list[Statement]:
        """Background plus all positive-test formulas."""
        out = [ax.statement for ax in self.background]
        for tc in self.positive_tests:
            out.extend(tc.formulas)
        return out

    def domain(self) -> tuple[str, ...]:
        """The fixed grounding domain shared by every per-instance check:
        named individuals of the whole instance (negative tests included, so
        their entailment checks are in range) plus existential witnesses for
        the assertable statements."""
        if self._domain is None:
            assertable = [ax.statement for ax in self.kb] + self.context_statements()
            named: set[str] = set()
            for stmt in assertable:
                named |= individual_names(stmt)
            for tc in self.negative_tests:
                for stmt in tc.formulas:
                    named |= individual_names(stmt)
            domain = sorted(named) + witness_names(assertable, self.witness_budget)
            self._domain = tuple(domain) if domain else ("_e1",)
        return self._domain

    # -- memoised validity -------------------------------------------------

    def valid_kept(self, kept: frozenset) -> bool:
        """Does keeping exactly `kept` ⊆ kb (with background and positive
        tests) satisfy the requirements and entail no negative test?"""
        kept = frozenset(kept)
        hit = self._valid_cache.get(kept)
        if hit is not None:
            return hit
        verdict = self._report_kept(kept).valid
        self._valid_cache[kept] = verdict
        return verdict

    def valid_without(self, removed: Iterable[int]) -> bool:
        return self.valid_kept(self.kb_ids - frozenset(removed))

    def _report_kept(self, kept: frozenset) -> ValidityReport:
        statements = [self.kb[i - 1].statement for i in sorted(kept)]
        statements += self.context_statements()
        consistent = self._consistent_fixed(statements)
        coherent: Optional[bool] = None
        unsat: tuple[str, ...] = ()
        violated: list[int] = []
        if consistent:
            if self.coherence_required:
                unsat = tuple(self._unsat_concepts_fixed(statements))
                coherent = not unsat
            for i, tc in enumerate(self.negative_tests):
                # negative tests are judged as one unit, same as valid_adding
                if self._entails_fixed(statements, list(tc.formulas)):
                    violated.append(i)
        elif self.coherence_required:
            coherent = False
        return ValidityReport(consistent, coherent, unsat, tuple(violated))

    def check_validity(self, removed: Iterable[int] = ()) -> ValidityReport:
        return self._report_kept(self.kb_ids - frozenset(removed))

    def entails_kept(self, kept: frozenset, formulas: Sequence[Statement]) -> bool:
        """Memoised entailment from (kept kb) ∪ background ∪ positive tests."""
        kept = frozenset(kept)
        if len(formulas) > 1:
            # per-formula so every subset of a query reuses the same entries
            return all(self.entails_kept(kept, [f]) for f in formulas)
        key = (kept, tuple(serialize_statement(f) for f in formulas))
        hit = self._entails_cache.get(key)
        if hit is not None:
            return hit
        statements = [self.kb[i - 1].statement for i in sorted(kept)]
        statements += self.context_statements()
        verdict = self._entails_fixed(statements, list(formulas))
        self._entails_cache[key] = verdict
        return verdict

    def valid_adding(self, kept: frozenset, formulas: Sequence[Statement],
                     skip_negative: Optional[tuple] = None) -> bool:
        """Like valid_kept, with extra formulas adopted into the theory.
        Used to test whether a candidate answer would refute a diagnosis.
        skip_negative names one negative test (by its serialized texts) to
        ignore — needed when re-judging a query that itself became a
        negative test."""
        kept = frozenset(kept)
        texts = tuple(serialize_statement(f) for f in formulas)
        key = ("add", kept, texts, skip_negative)
        hit = self._valid_cache.get(key)
        if hit is not None:
            return hit
        statements = [self.kb[i - 1].statement for i in sorted(kept)]
        statements += self.context_statements()
        statements += list(formulas)
        verdict = self._consistent_fixed(statements)
        if verdict and self.coherence_required:
            verdict = not self._unsat_concepts_fixed(statements)
        if verdict:
            for tc in self.negative_tests:
                if skip_negative is not None and tc.texts == skip_negative:
                    continue
                if self._entails_fixed(statements, list(tc.formulas)):
                    verdict = False
                    break
        self._valid_cache[key] = verdict
        return verdict

    # -- fixed-domain primitives ------------------------------------------

    def _consistent_fixed(self, statements: Sequence[Statement]) -> bool:
        g = Grounder(self.domain())
        for stmt in statements:
            g.assert_statement(stmt, "check")
        return sat.satisfiable(g.clauses)

    def _unsat_concepts_fixed(self, statements: Sequence[Statement]) -> list[str]:
        names: set[str] = set()
        for ax in self.kb:
            names |= concept_names(ax.statement)
        for ax in self.background:
            names |= concept_names(ax.statement)
        bad = []
        for name in sorted(names):
            g = Grounder(self.domain() + ("_z0",))
            for stmt in statements:
                g.assert_statement(stmt, "check")
            g.assert_statement(ConceptAssertion(name, "_z0"), "probe")
            if not sat.satisfiable(g.clauses):
                bad.append(name)
        return bad

    def _entails_fixed(self, statements: Sequence[Statement],
                       formulas: list[Statement]) -> bool:
        if not formulas:
            return True
        if len(formulas) > 1:
            # Entailing a list of closed formulas is entailing each one, and
            # one refutation per formula keeps propagation strong: negating
            # the whole list yields a disjunction the solver handles badly.
            return all(self._entails_fixed(statements, [f])
                       for f in formulas)
        zs = _query_witnesses(formulas)
        g = Grounder(self.domain() + tuple(zs))
        for stmt in statements:
            g.assert_statement(stmt, "kb")
        fresh = iter(zs)
        negation = _disj([g.negated_statement_formula(f, fresh) for f in formulas])
        g.assert_formula(negation, "query")
        return not sat.satisfiable(g.clauses)

    def with_test_case(self, kind: str, texts: Sequence[str]) -> "Dpi":
        """A new instance with one more positive or negative test case.
        Caches start empty: validity verdicts depend on the test set."""
        tc = TestCase.parse(list(texts))
        pos, neg = self.positive_tests, self.negative_tests
        if kind == "positive":
            pos = pos + (tc,)
        elif kind == "negative":
            neg = neg + (tc,)
        else:
            raise ValueError(f"test-case kind must be positive or negative,"
                             f" got {kind!r}")
        return Dpi(kb=self.kb, background=self.background,
                   positive_tests=pos, negative_tests=neg,
                   requirements=self.requirements,
                   witness_budget=self.witness_budget,
                   entailment_kinds=self.entailment_kinds,
                   fault_model=self.fault_model)

    # -- admissibility -----------------------------------------------------

    def ensure_admissible(self) -> None:
        """Background plus positive tests must leave room for a diagnosis."""
        if not self.valid_kept(frozenset()):
            raise InadmissibleDpiError(
                "background and positive tests violate the requirements; "
                "no diagnosis exists")

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        out = {
            "kb": [ax.text for ax in self.kb],
            "background": [ax.text for ax in self.background],
            "positive_tests": [tc.to_json() for tc in self.positive_tests],
            "negative_tests": [tc.to_json() for tc in self.negative_tests],
            "requirements": sorted(self.requirements),
            "witness_budget": self.witness_budget,
            "entailment_kinds": list(self.entailment_kinds),
        }
        if self.fault_model is not None:
            out["fault_model"] = self.fault_model
        return out


def check_validity(dpi: "Dpi", removed: Iterable[int] = ()) -> ValidityReport:
    """Validity of the instance with `removed` kb axioms taken out."""
    return dpi.check_validity(removed)


def dpi_from_dict(data: dict) -> Dpi:
    kb_src = data.get("kb", [])
    bg_src = data.get("background", [])
    kb = parse_kb(kb_src if isinstance(kb_src, str) else "\n".join(kb_src))
    background = parse_kb(bg_src if isinstance(bg_src, str) else "\n".join(bg_src))
    positive = tuple(TestCase.parse(tc) for tc in data.get("positive_tests", []))
    negative = tuple(TestCase.parse(tc) for tc in data.get("negative_tests", []))
    requirements = frozenset(data.get("requirements", ["consistency"]))
    return Dpi(
        kb=tuple(kb),
        background=tuple(background),
        positive_tests=positive,
        negative_tests=negative,
        requirements=requirements,
        witness_budget=int(data.get("witness_budget", 1)),
        entailment_kinds=tuple(data.get("entailment_kinds",
                                        ("assertions", "subsumptions"))),
        fault_model=data.get("fault_model"),
    )


def load_dpi(path: Union[str, Path]) -> Dpi:
    with open(path, "r", encoding="utf-8") as fh:
        return dpi_from_dict(json.load(fh))


def dump_dpi(dpi: Dpi, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dpi.to_dict(), fh, indent=2)
        fh.write("\n")
