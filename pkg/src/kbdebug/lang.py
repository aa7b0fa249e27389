"""Statement language for knowledge bases.

One statement per line, ``#`` starts a comment. Statement forms:

    C sub D             subsumption between concept expressions
    C equiv D           concept equivalence
    disjoint C D        disjointness (no common instances)
    C(a)                concept membership assertion for a named individual
    r(a, b)             role assertion between two named individuals
    clause L1 | L2 ...  ground clause; literals are P(a), r(a,b), optionally
                        negated with a leading '!'

Concept expressions are s-expressions over named concepts:

    name | top | bot
    (not C) | (and C1 C2 ...) | (or C1 C2 ...)
    (some r C) | (all r C)

``top`` and ``bot`` are reserved concept names denoting the universal and the
empty concept. Quantifier nesting is limited to depth 1: a ``some``/``all``
may not occur inside another ``some``/``all``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

MAX_QUANTIFIER_DEPTH = 1

SYNTAX_ELEMENTS = ("sub", "equiv", "not", "and", "or", "some", "all")


class ParseError(ValueError):
    """Raised for malformed statements; carries line/column info."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"line {line}, col {column}: {message}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# concept expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Not:
    arg: "Concept"


@dataclass(frozen=True)
class And:
    args: tuple["Concept", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Concept", ...]


@dataclass(frozen=True)
class Some:
    role: str
    arg: "Concept"


@dataclass(frozen=True)
class All:
    role: str
    arg: "Concept"


Concept = Union[Atom, Top, Bot, Not, And, Or, Some, All]


# ---------------------------------------------------------------------------
# statements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subsumption:
    left: Concept
    right: Concept


@dataclass(frozen=True)
class Equivalence:
    left: Concept
    right: Concept


@dataclass(frozen=True)
class Disjointness:
    left: Concept
    right: Concept


@dataclass(frozen=True)
class ConceptAssertion:
    concept: str
    individual: str


@dataclass(frozen=True)
class RoleAssertion:
    role: str
    subject: str
    object: str


@dataclass(frozen=True)
class Literal:
    positive: bool
    predicate: str
    args: tuple[str, ...]  # arity 1 or 2


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]


Statement = Union[
    Subsumption, Equivalence, Disjointness, ConceptAssertion, RoleAssertion, Clause
]


@dataclass(frozen=True)
class Axiom:
    """A parsed statement with a stable identifier within its problem instance."""

    id: int
    text: str
    kind: str
    statement: Statement
    syntax_counts: dict[str, int] = field(compare=False, hash=False, default_factory=dict)


KIND_BY_TYPE = {
    Subsumption: "subsumption",
    Equivalence: "equivalence",
    Disjointness: "disjointness",
    ConceptAssertion: "concept-assertion",
    RoleAssertion: "role-assertion",
    Clause: "propositional-clause",
}


# ---------------------------------------------------------------------------
# tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\(|\)|\||,|!|[A-Za-z_][A-Za-z0-9_'\-]*")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_'\-]*$")


def _tokenize(text: str, line_no: int) -> list[tuple[str, int]]:
    tokens: list[tuple[str, int]] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {ch!r}", line_no, pos + 1)
        tokens.append((m.group(0), pos + 1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, int]], line_no: int):
        self.tokens = tokens
        self.line_no = line_no
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def next(self) -> str:
        if self.i >= len(self.tokens):
            raise ParseError("unexpected end of statement", self.line_no,
                             self.tokens[-1][1] if self.tokens else 1)
        tok, _ = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise ParseError(f"expected {tok!r}, got {got!r}", self.line_no,
                             self.tokens[self.i - 1][1])

    def name(self, what: str = "name") -> str:
        tok = self.next()
        if not _NAME_RE.match(tok):
            raise ParseError(f"expected {what}, got {tok!r}", self.line_no,
                             self.tokens[self.i - 1][1])
        return tok

    def concept(self, depth: int = 0) -> Concept:
        tok = self.next()
        if tok == "(":
            op = self.name("operator")
            if op == "not":
                arg = self.concept(depth)
                self.expect(")")
                return Not(arg)
            if op in ("and", "or"):
                args = []
                while self.peek() != ")":
                    args.append(self.concept(depth))
                self.expect(")")
                if len(args) < 2:
                    raise ParseError(f"({op} ...) needs at least two arguments",
                                     self.line_no, 1)
                return And(tuple(args)) if op == "and" else Or(tuple(args))
            if op in ("some", "all"):
                if depth >= MAX_QUANTIFIER_DEPTH:
                    raise ParseError(
                        f"quantifier nesting deeper than {MAX_QUANTIFIER_DEPTH} "
                        "is not supported", self.line_no, 1)
                role = self.name("role name")
                arg = self.concept(depth + 1)
                self.expect(")")
                return Some(role, arg) if op == "some" else All(role, arg)
            raise ParseError(f"unknown operator {op!r}", self.line_no, 1)
        if not _NAME_RE.match(tok):
            raise ParseError(f"expected concept, got {tok!r}", self.line_no,
                             self.tokens[self.i - 1][1])
        if tok == "top":
            return Top()
        if tok == "bot":
            return Bot()
        return Atom(tok)

    def done(self) -> bool:
        return self.i >= len(self.tokens)


def _split_top_level(tokens: list[tuple[str, int]], keyword: str) -> int | None:
    """Index of `keyword` at parenthesis depth 0, or None."""
    depth = 0
    for idx, (tok, _) in enumerate(tokens):
        if tok == "(":
            depth += 1
        elif tok == ")":
            depth -= 1
        elif tok == keyword and depth == 0:
            return idx
    return None


def parse_statement(text: str, line_no: int = 0) -> Statement:
    """Parse a single statement string."""
    tokens = _tokenize(text, line_no)
    if not tokens:
        raise ParseError("empty statement", line_no, 1)

    head = tokens[0][0]
    if head == "disjoint":
        p = _Parser(tokens[1:], line_no)
        left = p.concept()
        right = p.concept()
        if not p.done():
            raise ParseError("trailing tokens after disjointness", line_no, 1)
        return Disjointness(left, right)

    if head == "clause":
        return _parse_clause(tokens[1:], line_no)

    for keyword, cls in (("sub", Subsumption), ("equiv", Equivalence)):
        idx = _split_top_level(tokens, keyword)
        if idx is not None:
            lp = _Parser(tokens[:idx], line_no)
            left = lp.concept()
            if not lp.done():
                raise ParseError(f"trailing tokens before {keyword!r}", line_no, 1)
            rp = _Parser(tokens[idx + 1:], line_no)
            right = rp.concept()
            if not rp.done():
                raise ParseError(f"trailing tokens after {keyword!r}", line_no, 1)
            return cls(left, right)

    # assertion: name(args)
    p = _Parser(tokens, line_no)
    pred = p.name("predicate")
    if pred in ("top", "bot"):
        raise ParseError(f"{pred!r} cannot be asserted directly", line_no, 1)
    p.expect("(")
    args = [p.name("individual")]
    while p.peek() == ",":
        p.next()
        args.append(p.name("individual"))
    p.expect(")")
    if not p.done():
        raise ParseError("trailing tokens after assertion", line_no, 1)
    if len(args) == 1:
        return ConceptAssertion(pred, args[0])
    if len(args) == 2:
        return RoleAssertion(pred, args[0], args[1])
    raise ParseError(f"assertions take 1 or 2 arguments, got {len(args)}",
                     line_no, 1)


def _parse_clause(tokens: list[tuple[str, int]], line_no: int) -> Clause:
    if not tokens:
        raise ParseError("empty clause", line_no, 1)
    literals: list[Literal] = []
    p = _Parser(tokens, line_no)
    while True:
        positive = True
        if p.peek() == "!":
            p.next()
            positive = False
        pred = p.name("predicate")
        p.expect("(")
        args = [p.name("individual")]
        while p.peek() == ",":
            p.next()
            args.append(p.name("individual"))
        p.expect(")")
        if len(args) > 2:
            raise ParseError("literals take 1 or 2 arguments", line_no, 1)
        literals.append(Literal(positive, pred, tuple(args)))
        if p.done():
            break
        p.expect("|")
    return Clause(tuple(literals))


def parse_kb(source: str) -> list[Axiom]:
    """Parse a multi-line KB into axioms with ids assigned in statement order.

    Checks that no predicate name is used with conflicting arity across the
    whole source (concept vs role).
    """
    axioms: list[Axiom] = []
    arity: dict[str, tuple[int, int]] = {}  # name -> (arity, line)
    next_id = 1
    for line_no, raw in enumerate(source.splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        stmt = parse_statement(text, line_no)
        for name, n in _predicate_arities(stmt):
            seen = arity.get(name)
            if seen is not None and seen[0] != n:
                raise ParseError(
                    f"predicate {name!r} used with arity {n} but previously "
                    f"with arity {seen[0]} (line {seen[1]})", line_no, 1)
            arity.setdefault(name, (n, line_no))
        axioms.append(Axiom(
            id=next_id,
            text=serialize_statement(stmt),
            kind=KIND_BY_TYPE[type(stmt)],
            statement=stmt,
            syntax_counts=syntax_counts(stmt),
        ))
        next_id += 1
    return axioms


def _predicate_arities(stmt: Statement) -> Iterator[tuple[str, int]]:
    for name in concept_names(stmt):
        yield name, 1
    for name in role_names(stmt):
        yield name, 2


# ---------------------------------------------------------------------------
# serialization (canonical text form, also the grammar above)
# ---------------------------------------------------------------------------

def serialize_concept(c: Concept) -> str:
    if isinstance(c, Atom):
        return c.name
    if isinstance(c, Top):
        return "top"
    if isinstance(c, Bot):
        return "bot"
    if isinstance(c, Not):
        return f"(not {serialize_concept(c.arg)})"
    if isinstance(c, And):
        return "(and " + " ".join(serialize_concept(a) for a in c.args) + ")"
    if isinstance(c, Or):
        return "(or " + " ".join(serialize_concept(a) for a in c.args) + ")"
    if isinstance(c, Some):
        return f"(some {c.role} {serialize_concept(c.arg)})"
    if isinstance(c, All):
        return f"(all {c.role} {serialize_concept(c.arg)})"
    raise TypeError(f"not a concept: {c!r}")


def serialize_statement(stmt: Statement) -> str:
    if isinstance(stmt, Subsumption):
        return f"{serialize_concept(stmt.left)} sub {serialize_concept(stmt.right)}"
    if isinstance(stmt, Equivalence):
        return f"{serialize_concept(stmt.left)} equiv {serialize_concept(stmt.right)}"
    if isinstance(stmt, Disjointness):
        return f"disjoint {serialize_concept(stmt.left)} {serialize_concept(stmt.right)}"
    if isinstance(stmt, ConceptAssertion):
        return f"{stmt.concept}({stmt.individual})"
    if isinstance(stmt, RoleAssertion):
        return f"{stmt.role}({stmt.subject},{stmt.object})"
    if isinstance(stmt, Clause):
        return "clause " + " | ".join(
            ("" if lit.positive else "!") + lit.predicate
            + "(" + ",".join(lit.args) + ")"
            for lit in stmt.literals)
    raise TypeError(f"not a statement: {stmt!r}")


# ---------------------------------------------------------------------------
# syntax census
# ---------------------------------------------------------------------------

def _concept_counts(c: Concept, counts: dict[str, int]) -> None:
    if isinstance(c, Not):
        counts["not"] = counts.get("not", 0) + 1
        _concept_counts(c.arg, counts)
    elif isinstance(c, And):
        # an n-ary application counts once, regardless of arity
        counts["and"] = counts.get("and", 0) + 1
        for a in c.args:
            _concept_counts(a, counts)
    elif isinstance(c, Or):
        counts["or"] = counts.get("or", 0) + 1
        for a in c.args:
            _concept_counts(a, counts)
    elif isinstance(c, Some):
        counts["some"] = counts.get("some", 0) + 1
        _concept_counts(c.arg, counts)
    elif isinstance(c, All):
        counts["all"] = counts.get("all", 0) + 1
        _concept_counts(c.arg, counts)


def syntax_counts(stmt: Statement) -> dict[str, int]:
    """Operator occurrence census of a statement's parsed form.

    Assertions and clauses have no counted operators. ``disjoint C D`` counts
    as its expansion C sub (not D): {sub: 1, not: 1} plus the operators inside
    C and D.
    """
    counts: dict[str, int] = {}
    if isinstance(stmt, Subsumption):
        counts["sub"] = 1
        _concept_counts(stmt.left, counts)
        _concept_counts(stmt.right, counts)
    elif isinstance(stmt, Equivalence):
        counts["equiv"] = 1
        _concept_counts(stmt.left, counts)
        _concept_counts(stmt.right, counts)
    elif isinstance(stmt, Disjointness):
        counts["sub"] = 1
        counts["not"] = counts.get("not", 0) + 1
        _concept_counts(stmt.left, counts)
        _concept_counts(stmt.right, counts)
    return counts


# ---------------------------------------------------------------------------
# signature helpers
# ---------------------------------------------------------------------------

def _concept_atoms(c: Concept) -> Iterator[str]:
    if isinstance(c, Atom):
        yield c.name
    elif isinstance(c, Not):
        yield from _concept_atoms(c.arg)
    elif isinstance(c, (And, Or)):
        for a in c.args:
            yield from _concept_atoms(a)
    elif isinstance(c, (Some, All)):
        yield from _concept_atoms(c.arg)


def _concept_roles(c: Concept) -> Iterator[str]:
    if isinstance(c, Not):
        yield from _concept_roles(c.arg)
    elif isinstance(c, (And, Or)):
        for a in c.args:
            yield from _concept_roles(a)
    elif isinstance(c, (Some, All)):
        yield c.role
        yield from _concept_roles(c.arg)


def concept_names(stmt: Statement) -> set[str]:
    """Unary predicate names occurring in the statement."""
    if isinstance(stmt, (Subsumption, Equivalence, Disjointness)):
        return set(_concept_atoms(stmt.left)) | set(_concept_atoms(stmt.right))
    if isinstance(stmt, ConceptAssertion):
        return {stmt.concept}
    if isinstance(stmt, RoleAssertion):
        return set()
    if isinstance(stmt, Clause):
        return {lit.predicate for lit in stmt.literals if len(lit.args) == 1}
    return set()


def role_names(stmt: Statement) -> set[str]:
    """Binary predicate names occurring in the statement."""
    if isinstance(stmt, (Subsumption, Equivalence, Disjointness)):
        return set(_concept_roles(stmt.left)) | set(_concept_roles(stmt.right))
    if isinstance(stmt, RoleAssertion):
        return {stmt.role}
    if isinstance(stmt, Clause):
        return {lit.predicate for lit in stmt.literals if len(lit.args) == 2}
    return set()


def individual_names(stmt: Statement) -> set[str]:
    """Named individuals occurring in the statement."""
    if isinstance(stmt, ConceptAssertion):
        return {stmt.individual}
    if isinstance(stmt, RoleAssertion):
        return {stmt.subject, stmt.object}
    if isinstance(stmt, Clause):
        return {a for lit in stmt.literals for a in lit.args}
    return set()


def existential_sites(stmt: Statement) -> int:
    """Number of `some` occurrences (each gets its own witness constants)."""
    return syntax_counts(stmt).get("some", 0)
