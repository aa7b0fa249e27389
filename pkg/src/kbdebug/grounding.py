"""Grounding of KB statements to propositional CNF over a bounded domain.

The domain is the set of named individuals plus, per `some` occurrence in the
asserted statements, `witness_budget` fresh witness constants. Quantifiers
range over this shared domain (domain-closure approximation): (some r C) at d
becomes a disjunction over the domain, (all r C) a conjunction. This keeps
consistency decidable by SAT while reproducing the intended verdicts on
desk-scale KBs; it is documented as an approximation of unrestricted
first-order semantics.

Formulas pass through negation normal form; complex disjuncts are translated
to CNF with Tseitin auxiliary variables. Every produced clause carries a
provenance tag (the originating axiom id, test case, or query marker).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

from .lang import (
    All, And, Atom, Bot, Clause, Concept, ConceptAssertion, Disjointness,
    Equivalence, Literal, Not, Or, RoleAssertion, Some, Statement, Subsumption,
    Top, individual_names, syntax_counts,
)

AtomKey = tuple[str, tuple[str, ...]]  # (predicate, ground args)
Tag = Union[int, tuple[str, int], str]

# formula trees in NNF: True | False | ('lit', ±var) | ('and', [..]) | ('or', [..])
Formula = Union[bool, tuple]


@dataclass(frozen=True)
class GroundTheory:
    variables: dict[AtomKey, int]
    clauses: tuple[tuple[int, ...], ...]
    domain: tuple[str, ...]
    provenance: tuple[Tag, ...]  # parallel to clauses

    @property
    def num_vars(self) -> int:
        highest = max((abs(l) for c in self.clauses for l in c), default=0)
        return max(highest, len(self.variables))


def witness_names(statements: Iterable[Statement], witness_budget: int,
                  prefix: str = "_w") -> list[str]:
    """Fresh constants for the existential sites of `statements`, in order."""
    names: list[str] = []
    site = 0
    for stmt in statements:
        for _ in range(syntax_counts(stmt).get("some", 0)):
            site += 1
            for j in range(witness_budget):
                names.append(f"{prefix}{site}" if witness_budget == 1
                             else f"{prefix}{site}_{j + 1}")
    return names


def build_domain(statements: Iterable[Statement], witness_budget: int = 1,
                 extra: Sequence[str] = ()) -> tuple[str, ...]:
    """Named individuals (sorted) + per-site witnesses + extra constants."""
    stmts = list(statements)
    named: set[str] = set()
    for stmt in stmts:
        named |= individual_names(stmt)
    domain = sorted(named) + witness_names(stmts, witness_budget) + list(extra)
    return tuple(domain)


class Grounder:
    """Accumulates ground clauses for statements over a fixed domain."""

    def __init__(self, domain: Sequence[str]):
        self.domain = tuple(domain)
        self.variables: dict[AtomKey, int] = {}
        self.clauses: list[tuple[int, ...]] = []
        self.provenance: list[Tag] = []
        self._aux = 0

    # -- variables ---------------------------------------------------------

    def var(self, predicate: str, args: tuple[str, ...]) -> int:
        key = (predicate, args)
        idx = self.variables.get(key)
        if idx is None:
            idx = len(self.variables) + self._aux + 1
            self.variables[key] = idx
        return idx

    def _aux_var(self) -> int:
        self._aux += 1
        return len(self.variables) + self._aux

    # -- formula construction (NNF with constant folding) ------------------

    def concept_formula(self, c: Concept, d: str) -> Formula:
        if isinstance(c, Atom):
            return ("lit", self.var(c.name, (d,)))
        if isinstance(c, Top):
            return True
        if isinstance(c, Bot):
            return False
        if isinstance(c, Not):
            return _neg(self.concept_formula(c.arg, d))
        if isinstance(c, And):
            return _conj([self.concept_formula(a, d) for a in c.args])
        if isinstance(c, Or):
            return _disj([self.concept_formula(a, d) for a in c.args])
        if isinstance(c, Some):
            return _disj([
                _conj([("lit", self.var(c.role, (d, e))),
                       self.concept_formula(c.arg, e)])
                for e in self.domain])
        if isinstance(c, All):
            return _conj([
                _disj([("lit", -self.var(c.role, (d, e))),
                       self.concept_formula(c.arg, e)])
                for e in self.domain])
        raise TypeError(f"not a concept: {c!r}")

    def _literal_formula(self, lit: Literal) -> Formula:
        v = self.var(lit.predicate, lit.args)
        return ("lit", v if lit.positive else -v)

    def statement_formulas(self, stmt: Statement) -> Iterator[Formula]:
        """The formula(s) asserting `stmt` over the domain."""
        if isinstance(stmt, Subsumption):
            for d in self.domain:
                yield _disj([_neg(self.concept_formula(stmt.left, d)),
                             self.concept_formula(stmt.right, d)])
        elif isinstance(stmt, Equivalence):
            for d in self.domain:
                yield _disj([_neg(self.concept_formula(stmt.left, d)),
                             self.concept_formula(stmt.right, d)])
                yield _disj([_neg(self.concept_formula(stmt.right, d)),
                             self.concept_formula(stmt.left, d)])
        elif isinstance(stmt, Disjointness):
            for d in self.domain:
                yield _disj([_neg(self.concept_formula(stmt.left, d)),
                             _neg(self.concept_formula(stmt.right, d))])
        elif isinstance(stmt, ConceptAssertion):
            yield ("lit", self.var(stmt.concept, (stmt.individual,)))
        elif isinstance(stmt, RoleAssertion):
            yield ("lit", self.var(stmt.role, (stmt.subject, stmt.object)))
        elif isinstance(stmt, Clause):
            yield _disj([self._literal_formula(lit) for lit in stmt.literals])
        else:
            raise TypeError(f"not a statement: {stmt!r}")

    def negated_statement_formula(self, stmt: Statement,
                                  fresh: Iterator[str]) -> Formula:
        """Formula asserting that `stmt` FAILS.

        Quantified statement kinds (sub/equiv/disjoint) fail at some point of
        the extended domain; the existential is instantiated at a fresh
        constant drawn from `fresh` (a standard witness, exact for this
        refutation use). Ground statements negate literally.
        """
        if isinstance(stmt, Subsumption):
            z = next(fresh)
            return _conj([self.concept_formula(stmt.left, z),
                          _neg(self.concept_formula(stmt.right, z))])
        if isinstance(stmt, Equivalence):
            z1 = next(fresh)
            z2 = next(fresh)
            return _disj([
                _conj([self.concept_formula(stmt.left, z1),
                       _neg(self.concept_formula(stmt.right, z1))]),
                _conj([self.concept_formula(stmt.right, z2),
                       _neg(self.concept_formula(stmt.left, z2))]),
            ])
        if isinstance(stmt, Disjointness):
            z = next(fresh)
            return _conj([self.concept_formula(stmt.left, z),
                          self.concept_formula(stmt.right, z)])
        if isinstance(stmt, ConceptAssertion):
            return ("lit", -self.var(stmt.concept, (stmt.individual,)))
        if isinstance(stmt, RoleAssertion):
            return ("lit", -self.var(stmt.role, (stmt.subject, stmt.object)))
        if isinstance(stmt, Clause):
            return _conj([_neg(self._literal_formula(lit))
                          for lit in stmt.literals])
        raise TypeError(f"not a statement: {stmt!r}")

    # -- CNF assertion -----------------------------------------------------

    def assert_statement(self, stmt: Statement, tag: Tag) -> None:
        for f in self.statement_formulas(stmt):
            self.assert_formula(f, tag)

    def assert_formula(self, f: Formula, tag: Tag) -> None:
        if f is True:
            return
        if f is False:
            self._add((), tag)
            return
        kind = f[0]
        if kind == "lit":
            self._add((f[1],), tag)
        elif kind == "and":
            for part in f[1]:
                self.assert_formula(part, tag)
        elif kind == "or":
            lits = [self._tseitin(part, tag) for part in f[1]]
            self._add(tuple(lits), tag)
        else:
            raise ValueError(f"bad formula node {kind!r}")

    def _tseitin(self, f: Formula, tag: Tag) -> int:
        """A literal equivalent to sub-formula f, defining clauses as needed."""
        if f is True or f is False:
            a = self._aux_var()
            self._add((a,) if f is True else (-a,), tag)
            return a
        kind = f[0]
        if kind == "lit":
            return f[1]
        parts = [self._tseitin(p, tag) for p in f[1]]
        a = self._aux_var()
        if kind == "and":
            for p in parts:
                self._add((-a, p), tag)
            self._add(tuple([a] + [-p for p in parts]), tag)
        elif kind == "or":
            self._add(tuple([-a] + parts), tag)
            for p in parts:
                self._add((a, -p), tag)
        else:
            raise ValueError(f"bad formula node {kind!r}")
        return a

    def _add(self, clause: tuple[int, ...], tag: Tag) -> None:
        self.clauses.append(clause)
        self.provenance.append(tag)

    def theory(self) -> GroundTheory:
        return GroundTheory(
            variables=dict(self.variables),
            clauses=tuple(self.clauses),
            domain=self.domain,
            provenance=tuple(self.provenance),
        )


# -- NNF constructors with constant folding ---------------------------------

def _neg(f: Formula) -> Formula:
    if f is True:
        return False
    if f is False:
        return True
    kind = f[0]
    if kind == "lit":
        return ("lit", -f[1])
    if kind == "and":
        return _disj([_neg(p) for p in f[1]])
    if kind == "or":
        return _conj([_neg(p) for p in f[1]])
    raise ValueError(f"bad formula node {kind!r}")


def _conj(parts: list[Formula]) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if p is False:
            return False
        if p is True:
            continue
        if isinstance(p, tuple) and p[0] == "and":
            flat.extend(p[1])
        else:
            flat.append(p)
    if not flat:
        return True
    if len(flat) == 1:
        return flat[0]
    return ("and", flat)


def _disj(parts: list[Formula]) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if p is True:
            return True
        if p is False:
            continue
        if isinstance(p, tuple) and p[0] == "or":
            flat.extend(p[1])
        else:
            flat.append(p)
    if not flat:
        return False
    if len(flat) == 1:
        return flat[0]
    return ("or", flat)


def ground_statements(tagged: Sequence[tuple[Statement, Tag]],
                      witness_budget: int = 1,
                      extra_domain: Sequence[str] = ()) -> GroundTheory:
    """Ground a tagged statement list over its own named individuals plus
    witnesses (and optional extra constants)."""
    statements = [s for s, _ in tagged]
    domain = build_domain(statements, witness_budget, extra_domain)
    g = Grounder(domain)
    for stmt, tag in tagged:
        g.assert_statement(stmt, tag)
    return g.theory()
