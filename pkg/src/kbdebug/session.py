"""The sequential debugging loop.

A session computes the leading minimal diagnoses of an instance, asks the
best discriminating query per the configured strategy, folds each answer
back into the instance as a test case (yes → positive, no → negative),
updates the belief over diagnoses, and stops when one diagnosis dominates
by the acceptance threshold or no discriminating query remains. Candidate
maintenance is either static (the initial leading set only shrinks) or
dynamic (leading diagnoses are recomputed against the grown instance after
every answer). `run_batch` drives a whole session against an oracle that
answers from a chosen target diagnosis.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence

from .direct import inv_hs_tree
from .hstree import hs_tree_diagnoses
from .lang import parse_statement
from .probability import (FaultModel, axiom_probabilities, bayes_update,
                          diagnosis_prior, normalize, prior_belief)
from .queries import (MAX_LEADING_FOR_POOL, Partition, Query,
                      ckk_query_search, generate_query_pool)
from .reasoning import Dpi, InadmissibleDpiError, id_key, sorted_ids
from .strategies import RioState, StrategyChoice, rio_update, select_query

AWAITING = "awaiting-answer"
CONVERGED = "converged"
EXHAUSTED = "exhausted"
ABORTED = "aborted"

ENGINES = ("conflict", "direct")
MODES = ("static", "dynamic")


@dataclass(frozen=True)
class SessionConfig:
    n_leading: int = 9
    sigma: float = 0.85
    engine: str = "conflict"
    mode: str = "dynamic"
    strategy: StrategyChoice = field(default_factory=StrategyChoice)
    fault_model: Optional[FaultModel] = None
    gamma: Optional[float] = None

    def __post_init__(self) -> None:
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.n_leading < 1:
            raise ValueError("n_leading must be positive")
        if not 0.0 <= self.sigma <= 1.0:
            raise ValueError("sigma must be in [0, 1]")

    @property
    def model(self) -> FaultModel:
        return self.fault_model if self.fault_model is not None else FaultModel()

    def to_dict(self) -> dict:
        return {
            "n_leading": self.n_leading,
            "sigma": self.sigma,
            "engine": self.engine,
            "mode": self.mode,
            "strategy": self.strategy.to_dict(),
            "fault_model": (self.fault_model.to_dict()
                            if self.fault_model is not None else None),
            "gamma": self.gamma,
        }

    @staticmethod
    def from_dict(data: Mapping) -> "SessionConfig":
        model = data.get("fault_model")
        strategy = data.get("strategy")
        return SessionConfig(
            n_leading=int(data.get("n_leading", 9)),
            sigma=float(data.get("sigma", 0.85)),
            engine=data.get("engine", "conflict"),
            mode=data.get("mode", "dynamic"),
            strategy=(StrategyChoice.from_dict(strategy)
                      if strategy is not None else StrategyChoice()),
            fault_model=(FaultModel.from_dict(model)
                         if model is not None else None),
            gamma=(float(data["gamma"])
                   if data.get("gamma") is not None else None),
        )


@dataclass
class HistoryEntry:
    texts: tuple[str, ...]
    partition: Partition
    answer: str
    formulas: tuple = ()

    def __post_init__(self) -> None:
        if not self.formulas:
            self.formulas = tuple(parse_statement(t) for t in self.texts)

    def to_dict(self) -> dict:
        return {"query": list(self.texts),
                "partition": _partition_to_dict(self.partition),
                "answer": self.answer}

    @staticmethod
    def from_dict(data: Mapping) -> "HistoryEntry":
        return HistoryEntry(tuple(data["query"]),
                            _partition_from_dict(data["partition"]),
                            data["answer"])


@dataclass(frozen=True)
class RepairProposal:
    """A repaired knowledge base: everything outside the diagnosis plus the
    accumulated positive answers."""

    diagnosis: frozenset
    solution_kb: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"diagnosis": sorted_ids(self.diagnosis),
                "solution_kb": list(self.solution_kb)}


@dataclass
class SessionState:
    dpi: Dpi
    config: SessionConfig
    leading: list
    belief: dict
    rio: Optional[RioState] = None
    history: list = field(default_factory=list)
    status: str = AWAITING
    pending: Optional[Query] = None
    pool: Optional[list] = None
    skipped: set = field(default_factory=set)
    universe: Optional[list] = None
    proposal: Optional[RepairProposal] = None
    contradiction: bool = False


def _rank_key(belief: Mapping):
    return lambda d: (-belief.get(d, 0.0), len(d), id_key(d))


def _compute_leading(dpi: Dpi, config: SessionConfig,
                     seeds: Sequence[frozenset] = ()) -> list:
    if config.engine == "direct":
        diagnoses, _ = inv_hs_tree(dpi, m=config.n_leading,
                                   seed_diagnoses=seeds)
        return diagnoses
    probs = axiom_probabilities(config.model, dpi.kb)
    diagnoses, _ = hs_tree_diagnoses(dpi, probs, n=config.n_leading)
    return diagnoses


def _proposal_for(dpi: Dpi, diagnosis: frozenset) -> RepairProposal:
    texts = [ax.text for ax in dpi.kb if ax.id not in diagnosis]
    for tc in dpi.positive_tests:
        texts.extend(tc.texts)
    return RepairProposal(diagnosis=diagnosis, solution_kb=tuple(texts))


def _conclude(state: SessionState, status: str) -> None:
    state.status = status
    state.pending = None
    if state.leading:
        best = min(state.leading, key=_rank_key(state.belief))
        state.proposal = _proposal_for(state.dpi, best)
    else:
        state.status = ABORTED
        state.contradiction = True
        state.proposal = None


def start_session(dpi: Dpi, config: Optional[SessionConfig] = None
                  ) -> SessionState:
    """Compute leading diagnoses and priors; raises InadmissibleDpiError
    when no diagnosis exists at all."""
    config = config if config is not None else SessionConfig()
    if config.fault_model is None and dpi.fault_model is not None:
        # precedence: explicit config model > the instance's own model
        config = replace(config,
                         fault_model=FaultModel.from_dict(dpi.fault_model))
    dpi.ensure_admissible()
    leading = _compute_leading(dpi, config)
    belief = prior_belief(config.model, dpi.kb, leading)
    rio = None
    if config.strategy.kind == "rio":
        rio = config.strategy.rio or RioState()
    state = SessionState(dpi=dpi, config=config, leading=leading,
                         belief=belief, rio=rio)
    if config.mode == "static":
        state.universe = list(leading)
    if len(leading) <= 1:
        _conclude(state, CONVERGED)
    return state


def _current_pool(state: SessionState) -> list:
    if state.pool is None:
        leading = state.leading[:MAX_LEADING_FOR_POOL]
        if len(leading) < 2:
            state.pool = []
        elif state.config.gamma is not None:
            query = ckk_query_search(state.dpi, leading, state.belief,
                                     state.config.gamma)
            state.pool = [query] if query is not None else []
        else:
            state.pool = generate_query_pool(state.dpi, leading)
    return [q for q in state.pool if q.texts not in state.skipped]


def next_query(state: SessionState) -> Optional[Query]:
    """The pending query, selecting one if none is pending; None when no
    discriminating query exists (the session then concludes)."""
    if state.status != AWAITING:
        return None
    if state.pending is not None:
        return state.pending
    pool = _current_pool(state)
    if not pool:
        _conclude(state, EXHAUSTED)
        return None
    choice = state.config.strategy
    if choice.kind == "rio" and state.rio is not None:
        choice = replace(choice, rio=state.rio)
    query, _ = select_query(pool, state.belief, choice,
                            salt=len(state.history))
    state.pending = query
    return query


def _history_factor(state: SessionState, d: frozenset,
                    entry: HistoryEntry) -> float:
    """How strongly a past answer supports diagnosis d: 1 if d predicted
    the answer, 0 if it predicted the opposite, ½ if it was uncommitted."""
    yes = entry.answer == "yes"
    if d in entry.partition.d_plus:
        return 1.0 if yes else 0.0
    if d in entry.partition.d_minus:
        return 0.0 if yes else 1.0
    if d in entry.partition.d_zero:
        return 0.5
    # d was not among the leading diagnoses when this was asked: re-judge.
    kept = state.dpi.kb_ids - d
    if yes:
        # the query joined the positive tests, so a currently-valid d
        # entails it by construction
        return 1.0
    if not state.dpi.valid_adding(kept, list(entry.formulas),
                                  skip_negative=entry.texts):
        return 1.0
    if state.dpi.entails_kept(kept, list(entry.formulas)):
        return 0.0
    return 0.5


def _dynamic_belief(state: SessionState, leading: Sequence[frozenset]) -> dict:
    """Posterior ∝ prior × per-answer factors; equals the incremental
    update for diagnoses that were present all along and extends it to
    newly discovered ones."""
    probs = axiom_probabilities(state.config.model, state.dpi.kb)
    kb_ids = state.dpi.kb_ids
    weights = {}
    for d in leading:
        w = diagnosis_prior(probs, kb_ids, d)
        for entry in state.history:
            w *= _history_factor(state, d, entry)
        weights[d] = w
    return normalize(weights)


def submit_answer(state: SessionState, answer: str) -> SessionState:
    """Fold an answer in: grow the instance, update belief and risk state,
    refresh the leading set, and run the stop check."""
    if state.status != AWAITING or state.pending is None:
        raise ValueError("no pending query to answer")
    if answer not in ("yes", "no", "skip"):
        raise ValueError(f"answer must be yes, no, or skip, got {answer!r}")

    if answer == "skip":
        state.skipped.add(state.pending.texts)
        state.pending = None
        return state

    query = state.pending
    partition = query.partition
    kind = "positive" if answer == "yes" else "negative"
    state.dpi = state.dpi.with_test_case(kind, list(query.texts))
    state.belief = bayes_update(state.belief, partition, answer)
    if state.rio is not None:
        state.rio = rio_update(state.rio, partition, answer,
                               len(state.leading))
    state.history.append(HistoryEntry(query.texts, partition, answer))
    state.pending = None
    state.pool = None
    state.skipped = set()

    if state.config.mode == "static":
        state.universe = [d for d in state.universe
                          if state.dpi.valid_without(d)]
        state.leading = list(state.universe)
        restricted = {d: state.belief.get(d, 0.0) for d in state.leading}
        if sum(restricted.values()) > 0:
            restricted = normalize(restricted)
        state.belief = restricted
    else:
        seeds = [d for d in state.leading if state.dpi.valid_without(d)]
        try:
            state.leading = _compute_leading(state.dpi, state.config,
                                             seeds=seeds)
        except InadmissibleDpiError:
            # the answer contradicted the instance outright; conclude below
            state.leading = []
        state.belief = _dynamic_belief(state, state.leading)

    if not state.leading:
        _conclude(state, ABORTED)
        return state
    if stop_check(state) is not None:
        _conclude(state, CONVERGED)
    return state


def stop_check(state: SessionState,
               sigma: Optional[float] = None) -> Optional[frozenset]:
    """The accepted diagnosis if the session should stop, else None.
    Stops when one diagnosis remains, the top two probabilities differ by
    more than sigma, or the queries ran out."""
    if state.status in (CONVERGED, EXHAUSTED) and state.proposal is not None:
        return state.proposal.diagnosis
    if not state.leading:
        return None
    sigma = state.config.sigma if sigma is None else sigma
    ranked = sorted(state.leading, key=_rank_key(state.belief))
    if len(ranked) == 1:
        return ranked[0]
    p1 = state.belief.get(ranked[0], 0.0)
    p2 = state.belief.get(ranked[1], 0.0)
    if p1 - p2 > sigma:
        return ranked[0]
    return None


# ---------------------------------------------------------------------------
# batch and non-interactive fronts
# ---------------------------------------------------------------------------

def run_batch(dpi: Dpi, config: Optional[SessionConfig], target: Iterable[int],
              max_rounds: int = 100) -> tuple[RepairProposal, int, list]:
    """Run a session to convergence against an oracle answering from the
    target diagnosis: yes iff the target's repaired KB (with all positive
    answers so far) entails the query."""
    target = frozenset(target)
    if not dpi.valid_without(target):
        raise ValueError("target is not a diagnosis of the instance")
    state = start_session(dpi, config)
    while state.status == AWAITING and len(state.history) < max_rounds:
        query = next_query(state)
        if query is None:
            break
        kept = state.dpi.kb_ids - target
        answer = ("yes" if state.dpi.entails_kept(kept, list(query.formulas))
                  else "no")
        submit_answer(state, answer)
    if state.proposal is None:
        _conclude(state, EXHAUSTED)
    return state.proposal, len(state.history), list(state.history)


def non_interactive_debug(dpi: Dpi, fault_model: Optional[FaultModel] = None,
                          n: Optional[int] = None,
                          time_limit: Optional[float] = None
                          ) -> tuple[list, bool]:
    """Most probable minimal diagnoses, best-first; the flag is False when
    the time budget cut the search short."""
    if fault_model is None and dpi.fault_model is not None:
        fault_model = FaultModel.from_dict(dpi.fault_model)
    probs = axiom_probabilities(fault_model or FaultModel(), dpi.kb)
    deadline = (time.monotonic() + time_limit
                if time_limit is not None else None)
    state = None
    found: list = []
    while True:
        found, state = hs_tree_diagnoses(dpi, probs, n=len(found) + 1,
                                         state=state)
        if state.exhausted or (n is not None and len(found) >= n):
            return (found if n is None else found[:n]), True
        if deadline is not None and time.monotonic() >= deadline:
            return found, False


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _partition_to_dict(p: Partition) -> dict:
    return {"d_plus": [sorted_ids(d) for d in p.d_plus],
            "d_minus": [sorted_ids(d) for d in p.d_minus],
            "d_zero": [sorted_ids(d) for d in p.d_zero]}


def _partition_from_dict(data: Mapping) -> Partition:
    as_sets = lambda key: [frozenset(ids) for ids in data[key]]
    return Partition.of(as_sets("d_plus"), as_sets("d_minus"),
                        as_sets("d_zero"))


def _query_to_dict(q: Query) -> dict:
    return {"formulas": list(q.texts),
            "partition": _partition_to_dict(q.partition)}


def _query_from_dict(data: Mapping) -> Query:
    return Query.build([parse_statement(t) for t in data["formulas"]],
                       _partition_from_dict(data["partition"]))


def session_to_dict(state: SessionState) -> dict:
    return {
        "dpi": state.dpi.to_dict(),
        "config": state.config.to_dict(),
        "leading": [sorted_ids(d) for d in state.leading],
        "belief": [[sorted_ids(d), p] for d, p in
                   sorted(state.belief.items(), key=lambda kv: id_key(kv[0]))],
        "rio": state.rio.to_dict() if state.rio is not None else None,
        "history": [h.to_dict() for h in state.history],
        "status": state.status,
        "pending": (_query_to_dict(state.pending)
                    if state.pending is not None else None),
        "pool": ([_query_to_dict(q) for q in state.pool]
                 if state.pool is not None else None),
        "skipped": [list(texts) for texts in sorted(state.skipped)],
        "universe": ([sorted_ids(d) for d in state.universe]
                     if state.universe is not None else None),
        "proposal": (state.proposal.to_dict()
                     if state.proposal is not None else None),
        "contradiction": state.contradiction,
    }


def session_from_dict(data: Mapping) -> SessionState:
    from .reasoning import dpi_from_dict

    config = SessionConfig.from_dict(data["config"])
    state = SessionState(
        dpi=dpi_from_dict(data["dpi"]),
        config=config,
        leading=[frozenset(ids) for ids in data["leading"]],
        belief={frozenset(ids): p for ids, p in data["belief"]},
        rio=(RioState.from_dict(data["rio"])
             if data.get("rio") is not None else None),
        history=[HistoryEntry.from_dict(h) for h in data.get("history", [])],
        status=data.get("status", AWAITING),
        pending=(_query_from_dict(data["pending"])
                 if data.get("pending") is not None else None),
        pool=([_query_from_dict(q) for q in data["pool"]]
              if data.get("pool") is not None else None),
        skipped={tuple(texts) for texts in data.get("skipped", [])},
        universe=([frozenset(ids) for ids in data["universe"]]
                  if data.get("universe") is not None else None),
        contradiction=bool(data.get("contradiction", False)),
    )
    proposal = data.get("proposal")
    if proposal is not None:
        state.proposal = RepairProposal(
            diagnosis=frozenset(proposal["diagnosis"]),
            solution_kb=tuple(proposal["solution_kb"]))
    return state
