"""Query selection: scoring rules and the risk-adaptive learner.

Split-in-half prefers queries that cut the leading set evenly regardless of
probability; the entropy rule prefers maximal expected information w.r.t.
the current belief. The risk learner (cautiousness-adjusting selection)
keeps a cautiousness level c and picks the best-scoring query that is not
riskier than c, nudging c after each answer toward whichever behavior would
have eliminated more diagnoses.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence

from .queries import Partition, Query


@dataclass(frozen=True)
class RioState:
    """Cautiousness and its bounds for the risk-adaptive strategy."""

    c: float = 0.25
    c_min: float = 0.0
    c_max: float = 4 / 9
    epsilon: float = 0.25

    def __post_init__(self) -> None:
        if not self.c_min <= self.c <= self.c_max:
            raise ValueError("cautiousness must lie within its bounds")
        if not 0 < self.epsilon < 0.5:
            raise ValueError("epsilon must be in (0, 1/2)")

    def to_dict(self) -> dict:
        return {"c": self.c, "c_min": self.c_min, "c_max": self.c_max,
                "epsilon": self.epsilon}

    @staticmethod
    def from_dict(data: Mapping) -> "RioState":
        return RioState(
            c=float(data.get("c", 0.25)),
            c_min=float(data.get("c_min", 0.0)),
            c_max=float(data.get("c_max", 4 / 9)),
            epsilon=float(data.get("epsilon", 0.25)))


@dataclass(frozen=True)
class StrategyChoice:
    kind: str = "entropy"  # random | split | entropy | rio
    rio: Optional[RioState] = None
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("random", "split", "entropy", "rio"):
            raise ValueError(f"unknown strategy kind: {self.kind!r}")
        if self.kind == "rio" and self.rio is None:
            object.__setattr__(self, "rio", RioState())
        if self.kind != "rio" and self.rio is not None:
            raise ValueError("rio state only applies to the rio strategy")

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "rng_seed": self.rng_seed}
        if self.rio is not None:
            out["rio"] = self.rio.to_dict()
        return out

    @staticmethod
    def from_dict(data: Mapping) -> "StrategyChoice":
        rio = data.get("rio")
        return StrategyChoice(
            kind=data.get("kind", "entropy"),
            rio=RioState.from_dict(rio) if rio is not None else None,
            rng_seed=int(data.get("rng_seed", data.get("seed", 0))))


# ---------------------------------------------------------------------------
# scores
# ---------------------------------------------------------------------------

def _plog(p: float) -> float:
    return p * math.log2(p) if p > 0 else 0.0


def score_split(partition: Partition) -> float:
    """Imbalance of the yes/no split plus the uncommitted count; 0 is an
    exact halving with nobody uncommitted."""
    return (abs(len(partition.d_plus) - len(partition.d_minus))
            + len(partition.d_zero))


def score_entropy(partition: Partition, belief: Mapping) -> float:
    """One minus the expected information of the answer (plus the
    uncommitted mass); 0 iff the answer is a fair coin that commits
    everyone."""
    mass = lambda ds: sum(belief.get(d, 0.0) for d in ds)
    p_zero = mass(partition.d_zero)
    p_yes = mass(partition.d_plus) + p_zero / 2
    p_no = mass(partition.d_minus) + p_zero / 2
    return _plog(p_yes) + _plog(p_no) + p_zero + 1


def query_cautiousness(partition: Partition, leading_count: int) -> float:
    """Worst-case eliminated fraction: how safe the query is."""
    return min(len(partition.d_plus), len(partition.d_minus)) / leading_count


def elimination_rate(partition: Partition, answer: str,
                     leading_count: int) -> float:
    """Fraction of leading diagnoses the given answer eliminated."""
    side = partition.d_minus if answer == "yes" else partition.d_plus
    return len(side) / leading_count


def rio_update(state: RioState, partition: Partition, answer: str,
               leading_count: int) -> RioState:
    """Move cautiousness toward the behavior that would have paid off:
    an answer that eliminated less than the attainable half raises c,
    one that eliminated more lowers it."""
    e = elimination_rate(partition, answer, leading_count)
    adj = math.floor(leading_count / 2 - state.epsilon) / leading_count - e
    c_adj = 2 * (state.c_max - state.c_min) * adj
    c = min(max(state.c + c_adj, state.c_min), state.c_max)
    return replace(state, c=c)


# ---------------------------------------------------------------------------
# selection
# ---------------------------------------------------------------------------

def select_query(pool: Sequence[Query], belief: Mapping,
                 choice: StrategyChoice, salt: int = 0
                 ) -> tuple[Query, Partition]:
    """Pick the next query from a pool per the configured strategy.

    Deterministic for split/entropy/rio (score, then lexicographically
    smallest serialized query); reproducible for random given the seed and
    salt (callers pass the round number so repeated calls differ).
    """
    if not pool:
        raise ValueError("cannot select from an empty query pool")

    if choice.kind == "random":
        rng = random.Random(f"{choice.rng_seed}:{salt}")
        query = rng.choice(list(pool))
        return query, query.partition

    if choice.kind == "split":
        query = min(pool, key=lambda q: (score_split(q.partition), q.texts))
        return query, query.partition

    ent = lambda q: score_entropy(q.partition, belief)
    if choice.kind == "entropy":
        query = min(pool, key=lambda q: (ent(q), q.texts))
        return query, query.partition

    # risk-adaptive: best-scoring query unless it is riskier than the
    # current cautiousness; then the best among the least cautious
    # admissible queries; if everything is too risky, fall back to the
    # overall best.
    rio = choice.rio or RioState()
    n = sum(len(side) for side in
            (pool[0].partition.d_plus, pool[0].partition.d_minus,
             pool[0].partition.d_zero))
    best = min(pool, key=lambda q: (ent(q), q.texts))
    if query_cautiousness(best.partition, n) >= rio.c:
        return best, best.partition
    admissible = [q for q in pool
                  if query_cautiousness(q.partition, n) >= rio.c]
    if admissible:
        least = min(query_cautiousness(q.partition, n) for q in admissible)
        tier = [q for q in admissible
                if query_cautiousness(q.partition, n) == least]
        query = min(tier, key=lambda q: (ent(q), q.texts))
        return query, query.partition
    return best, best.partition
