"""Query generation: how the engine finds questions that discriminate
between leading diagnoses.

Candidate query content comes from a surrogate of the KB's entailments:
atomic concept assertions over named individuals and (configurably) atomic
subsumptions between named concepts, minus everything already asserted
verbatim. For each non-empty subset of the leading diagnoses (the seed), the
entailments common to the seed's candidate KBs form a query; the remaining
leading diagnoses are classified into agreeing (entail everything), refuted
(become invalid with the query added), or uncommitted. Queries that refute
nobody discriminate nothing and are dropped; duplicates by partition are
dropped; survivors are reduced to partition-preserving minimal form.

The set-differencing search (`ckk_query_search`) avoids enumerating all
seeds: it builds balanced-probability bipartitions of the leading diagnoses
best-first (largest two blocks combined by difference before sum) and stops
at the first query scoring within the acceptance threshold.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .lang import (
    Atom, Clause, ConceptAssertion, Equivalence, Statement, Subsumption,
    concept_names, individual_names, serialize_statement,
)
from .reasoning import Dpi, id_key

MAX_LEADING_FOR_POOL = 12


@dataclass(frozen=True)
class Partition:
    """How a query splits the leading diagnoses: predicted-yes,
    predicted-no, and uncommitted."""

    d_plus: tuple
    d_minus: tuple
    d_zero: tuple

    @staticmethod
    def of(d_plus: Iterable, d_minus: Iterable, d_zero: Iterable) -> "Partition":
        order = lambda ds: tuple(sorted(ds, key=id_key))
        return Partition(order(d_plus), order(d_minus), order(d_zero))

    def key(self) -> tuple:
        return (frozenset(self.d_plus), frozenset(self.d_minus),
                frozenset(self.d_zero))

    def restricted(self, alive: Iterable) -> "Partition":
        keep = set(alive)
        return Partition.of(
            [d for d in self.d_plus if d in keep],
            [d for d in self.d_minus if d in keep],
            [d for d in self.d_zero if d in keep])


@dataclass(frozen=True)
class Query:
    formulas: tuple[Statement, ...]
    texts: tuple[str, ...]
    partition: Partition

    @staticmethod
    def build(formulas: Iterable[Statement], partition: Partition) -> "Query":
        pairs = sorted(((serialize_statement(f), f) for f in formulas))
        return Query(tuple(f for _, f in pairs), tuple(t for t, _ in pairs),
                     partition)


# ---------------------------------------------------------------------------
# surrogate entailment candidates
# ---------------------------------------------------------------------------

def candidate_entailments(dpi: Dpi) -> list[Statement]:
    """Atomic sentences a query may be built from, minus asserted ones."""
    concepts: set[str] = set()
    individuals: set[str] = set()
    for ax in list(dpi.kb) + list(dpi.background):
        concepts |= concept_names(ax.statement)
        individuals |= individual_names(ax.statement)
    for tc in list(dpi.positive_tests) + list(dpi.negative_tests):
        for stmt in tc.formulas:
            concepts |= concept_names(stmt)
            individuals |= individual_names(stmt)

    asserted = _asserted_sentences(dpi)
    out: list[Statement] = []
    if "assertions" in dpi.entailment_kinds:
        for c in sorted(concepts):
            for a in sorted(individuals):
                stmt = ConceptAssertion(c, a)
                if serialize_statement(stmt) not in asserted:
                    out.append(stmt)
    if "subsumptions" in dpi.entailment_kinds:
        for x in sorted(concepts):
            for y in sorted(concepts):
                if x == y:
                    continue
                stmt = Subsumption(Atom(x), Atom(y))
                if serialize_statement(stmt) not in asserted:
                    out.append(stmt)
    return out


def _asserted_sentences(dpi: Dpi) -> set[str]:
    """Serialized sentences stated verbatim somewhere in the instance."""
    seen: set[str] = set()
    statements = [ax.statement for ax in dpi.kb]
    statements += [ax.statement for ax in dpi.background]
    for tc in dpi.positive_tests:
        statements += list(tc.formulas)
    for stmt in statements:
        if isinstance(stmt, ConceptAssertion):
            seen.add(serialize_statement(stmt))
        elif isinstance(stmt, Clause) and len(stmt.literals) == 1:
            lit = stmt.literals[0]
            if lit.positive and len(lit.args) == 1:
                seen.add(serialize_statement(
                    ConceptAssertion(lit.predicate, lit.args[0])))
        elif isinstance(stmt, Subsumption):
            if isinstance(stmt.left, Atom) and isinstance(stmt.right, Atom):
                seen.add(serialize_statement(stmt))
        elif isinstance(stmt, Equivalence):
            if isinstance(stmt.left, Atom) and isinstance(stmt.right, Atom):
                seen.add(serialize_statement(
                    Subsumption(stmt.left, stmt.right)))
                seen.add(serialize_statement(
                    Subsumption(stmt.right, stmt.left)))
    return seen


def entailment_sets(dpi: Dpi, leading: Sequence[frozenset],
                    candidates: Optional[Sequence[Statement]] = None
                    ) -> dict[frozenset, frozenset]:
    """For each leading diagnosis, the candidate sentences its candidate KB
    entails (keyed by serialized text)."""
    if candidates is None:
        candidates = candidate_entailments(dpi)
    out: dict[frozenset, frozenset] = {}
    for d in leading:
        kept = dpi.kb_ids - d
        out[d] = frozenset(
            serialize_statement(c) for c in candidates
            if dpi.entails_kept(kept, [c]))
    return out


def common_entailments(dpi: Dpi, diagnoses: Iterable[frozenset],
                       esets: Optional[Mapping[frozenset, frozenset]] = None
                       ) -> list[Statement]:
    """Candidate sentences entailed by every given diagnosis's candidate KB."""
    ds = list(diagnoses)
    candidates = candidate_entailments(dpi)
    if esets is None:
        esets = entailment_sets(dpi, ds, candidates)
    common = None
    for d in ds:
        common = esets[d] if common is None else common & esets[d]
    if not common:
        return []
    by_text = {serialize_statement(c): c for c in candidates}
    return [by_text[t] for t in sorted(common)]


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def classify_partition(dpi: Dpi, leading: Sequence[frozenset],
                       formulas: Sequence[Statement],
                       esets: Optional[Mapping[frozenset, frozenset]] = None
                       ) -> Partition:
    """Sort each leading diagnosis by its stance on the query."""
    texts = [serialize_statement(f) for f in formulas]
    d_plus, d_minus, d_zero = [], [], []
    for d in leading:
        kept = dpi.kb_ids - d
        if esets is not None and d in esets:
            entails_all = set(texts) <= esets[d]
        else:
            entails_all = dpi.entails_kept(kept, list(formulas))
        if entails_all:
            d_plus.append(d)
        elif not dpi.valid_adding(kept, list(formulas)):
            d_minus.append(d)
        else:
            d_zero.append(d)
    return Partition.of(d_plus, d_minus, d_zero)


# ---------------------------------------------------------------------------
# pool generation
# ---------------------------------------------------------------------------

def generate_query_pool(dpi: Dpi, leading: Sequence[frozenset],
                        minimize: bool = True) -> list[Query]:
    """All partition-distinct discriminating queries over the leading
    diagnoses, seed-subset order, minimized."""
    ds = sorted(leading, key=id_key)
    if not 2 <= len(ds) <= MAX_LEADING_FOR_POOL:
        raise ValueError(
            f"query generation needs 2..{MAX_LEADING_FOR_POOL} leading "
            f"diagnoses, got {len(ds)}")
    candidates = candidate_entailments(dpi)
    esets = entailment_sets(dpi, ds, candidates)
    by_text = {serialize_statement(c): c for c in candidates}

    pool: list[Query] = []
    seen_partitions: set = set()
    classified: dict[frozenset, Optional[Partition]] = {}
    for size in range(1, len(ds) + 1):
        for seed in combinations(ds, size):
            common = frozenset.intersection(*(esets[d] for d in seed))
            if not common:
                continue
            if common in classified:
                partition = classified[common]
            else:
                formulas = [by_text[t] for t in sorted(common)]
                partition = classify_partition(dpi, ds, formulas, esets)
                if not partition.d_minus:
                    partition = None  # refutes nobody: not a query
                classified[common] = partition
            if partition is None:
                continue
            if partition.key() in seen_partitions:
                continue
            seen_partitions.add(partition.key())
            query = Query.build([by_text[t] for t in sorted(common)], partition)
            if minimize:
                query = minimize_query(dpi, query)
            pool.append(query)
    return pool


# ---------------------------------------------------------------------------
# minimization
# ---------------------------------------------------------------------------

def minimize_query(dpi: Dpi, query: Query) -> Query:
    """The smallest formula subset with the same partition.

    Keeping the partition needs: every refuted diagnosis stays refuted and
    does not come to entail the whole (smaller) query; every uncommitted
    diagnosis does not come to entail it either. (Agreement and validity
    survive shrinking automatically.) The check is monotone under formula
    addition, so the divide-and-conquer reduction applies.
    """
    formulas = list(query.formulas)

    def entails_all(d: frozenset, sub: Sequence[Statement]) -> bool:
        kept = dpi.kb_ids - d
        return all(dpi.entails_kept(kept, [f]) for f in sub)

    def preserved(sub: Sequence[Statement]) -> bool:
        if not sub:
            return False
        for d in query.partition.d_minus:
            if entails_all(d, sub):
                return False
            if dpi.valid_adding(dpi.kb_ids - d, list(sub)):
                return False
        for d in query.partition.d_zero:
            if entails_all(d, sub):
                return False
        return True

    reduced = _minimize_formulas(formulas, preserved)
    return Query.build(reduced, query.partition)


def _minimize_formulas(items: list, pred: Callable[[list], bool]) -> list:
    """Minimal sublist satisfying a monotone predicate; pred(items) must
    hold. Same divide-and-conquer scheme as the conflict search."""
    if pred([]):
        return []

    def rec(have: list, unchanged: bool, cand: list) -> list:
        if not unchanged and pred(have):
            return []
        if len(cand) == 1:
            return list(cand)
        k = len(cand) // 2
        o1, o2 = cand[:k], cand[k:]
        c2 = rec(have + o1, not o1, o2)
        c1 = rec(have + c2, not c2, o1)
        return c1 + c2

    return rec([], True, items)


# ---------------------------------------------------------------------------
# set-differencing bipartition search
# ---------------------------------------------------------------------------

def ckk_query_search(dpi: Dpi, leading: Sequence[frozenset],
                     belief: Mapping[frozenset, float], gamma: float,
                     score: Optional[Callable[[Partition], float]] = None
                     ) -> Optional[Query]:
    """Best query by balanced-probability bipartitions of the leading set.

    Explores complete two-way partitions in Karmarkar-Karp set-differencing
    order and evaluates each side as a query seed (smaller side first),
    returning the first query scoring ≤ gamma, or the best found. gamma = 0
    therefore degenerates to an exhaustive search over all seeds.
    """
    ds = sorted(leading, key=id_key)
    if len(ds) < 2:
        return None
    if score is None:
        from .strategies import score_entropy
        score = lambda q: score_entropy(q.partition, belief)

    candidates = candidate_entailments(dpi)
    esets = entailment_sets(dpi, ds, candidates)
    by_text = {serialize_statement(c): c for c in candidates}

    best: Optional[tuple[float, Query]] = None
    evaluated: set[frozenset] = set()

    def evaluate(seed: tuple) -> Optional[tuple[float, Query]]:
        seed_key = frozenset(seed)
        if not seed_key or len(seed_key) == len(ds) or seed_key in evaluated:
            return None
        evaluated.add(seed_key)
        common = frozenset.intersection(*(esets[d] for d in seed))
        if not common:
            return None
        formulas = [by_text[t] for t in sorted(common)]
        partition = classify_partition(dpi, ds, formulas, esets)
        if not partition.d_minus:
            return None
        query = minimize_query(dpi, Query.build(formulas, partition))
        return (score(query), query)

    # items: (imbalance, side_a, side_b); combining two items commits their
    # sides either against each other (difference) or together (sum)
    start = [(belief.get(d, 0.0), (d,), ()) for d in ds]

    def leaves(items):
        if len(items) == 1:
            yield items[0]
            return
        ordered = sorted(items, key=lambda it: (-it[0], id_key(it[1][0])))
        a, b, rest = ordered[0], ordered[1], ordered[2:]
        diff = (a[0] - b[0], tuple(a[1] + b[2]), tuple(a[2] + b[1]))
        total = (a[0] + b[0], tuple(a[1] + b[1]), tuple(a[2] + b[2]))
        yield from leaves(rest + [diff])
        yield from leaves(rest + [total])

    for _, side_a, side_b in leaves(start):
        sides = sorted((side_a, side_b), key=len)
        for side in sides:
            result = evaluate(side)
            if result is None:
                continue
            if best is None or result[0] < best[0]:
                best = result
            if result[0] <= gamma:
                return best[1]
    return best[1] if best else None
