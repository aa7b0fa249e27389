"""Fault probabilities for axioms and beliefs over diagnoses.

An axiom's fault probability comes from the fault rates of the syntax
elements it uses: p(ax) = 1 − ∏_se (1 − F_se)^c(se), where c counts each
n-ary operator application once. Axioms without logical structure
(assertions, ground clauses) get the model's default rate. Per-axiom
overrides win over both.

Beliefs are dicts mapping a diagnosis (frozenset of axiom ids) to its
probability. Answers update beliefs by Bayes with the 1 / 0 / ½ likelihoods
of the query partition (agreeing, disagreeing, uncommitted diagnoses).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Mapping, Union

from .lang import Axiom

Belief = Dict[frozenset, float]


@dataclass(frozen=True)
class FaultModel:
    elements: Mapping[str, float] = field(default_factory=dict)
    default: float = 0.001
    axioms: Mapping[int, float] = field(default_factory=dict)

    @staticmethod
    def from_dict(data: dict) -> "FaultModel":
        return FaultModel(
            elements=dict(data.get("elements", {})),
            default=float(data.get("default", 0.001)),
            axioms={int(k): float(v) for k, v in data.get("axioms", {}).items()},
        )

    def to_dict(self) -> dict:
        return {
            "elements": dict(self.elements),
            "default": self.default,
            "axioms": {str(k): v for k, v in self.axioms.items()},
        }


def load_fault_model(path: Union[str, Path]) -> FaultModel:
    with open(path, "r", encoding="utf-8") as fh:
        return FaultModel.from_dict(json.load(fh))


def axiom_fault_prob(model: FaultModel, axiom: Axiom) -> float:
    """Fault probability of one axiom under the model.

    Per-axiom overrides win. Axioms without logical structure, and axioms
    using a syntax element the model gives no rate for, fall back to the
    default rate; otherwise the element-wise formula applies.
    """
    override = model.axioms.get(axiom.id)
    if override is not None:
        return override
    counts = axiom.syntax_counts
    if not counts or any(e not in model.elements for e in counts):
        return model.default
    sound = 1.0
    for element, c in counts.items():
        sound *= (1.0 - model.elements[element]) ** c
    return 1.0 - sound


def axiom_probabilities(model: FaultModel, kb: Iterable[Axiom]) -> dict[int, float]:
    return {ax.id: axiom_fault_prob(model, ax) for ax in kb}


def diagnosis_prior(probs: Mapping[int, float], kb_ids: Iterable[int],
                    diagnosis: frozenset) -> float:
    """p(D) = ∏_{ax∈D} p(ax) · ∏_{ax∉D} (1 − p(ax)) over the kb.

    Members are multiplied before complements, each in id order, so
    symmetric diagnoses get bit-identical values (ranking ties then resolve
    by the deterministic id order, not floating-point noise)."""
    ids = set(kb_ids)
    p = 1.0
    for i in sorted(ids & diagnosis):
        p *= probs[i]
    for i in sorted(ids - diagnosis):
        p *= 1.0 - probs[i]
    return p


def normalize(belief: Belief) -> Belief:
    """Scale to sum 1; a zero-mass belief becomes uniform."""
    total = sum(belief.values())
    if total <= 0.0:
        if not belief:
            return {}
        u = 1.0 / len(belief)
        return {d: u for d in belief}
    return {d: v / total for d, v in belief.items()}


def prior_belief(model: FaultModel, kb: Iterable[Axiom],
                 diagnoses: Iterable[frozenset]) -> Belief:
    """Normalized prior over a set of diagnoses."""
    axs = list(kb)
    probs = axiom_probabilities(model, axs)
    ids = [ax.id for ax in axs]
    return normalize({d: diagnosis_prior(probs, ids, d) for d in diagnoses})


def _is_yes(answer) -> bool:
    if isinstance(answer, str):
        if answer not in ("yes", "no"):
            raise ValueError(f"answer must be yes or no, got {answer!r}")
        return answer == "yes"
    return bool(answer)


def answer_likelihood(belief: Belief, partition, answer) -> float:
    """p(q = answer) = p(agreeing side) + p(uncommitted)/2."""
    agreeing = partition.d_plus if _is_yes(answer) else partition.d_minus
    p = sum(belief.get(d, 0.0) for d in agreeing)
    p += sum(belief.get(d, 0.0) for d in partition.d_zero) / 2.0
    return p


def bayes_update(belief: Belief, partition, answer) -> Belief:
    """Posterior after an answer (boolean or "yes"/"no"); zero-mass results
    are returned as-is (every diagnosis contradicted) for the caller to
    handle."""
    eliminated = partition.d_minus if _is_yes(answer) else partition.d_plus
    halved = set(partition.d_zero)
    out: Belief = {}
    for d, v in belief.items():
        if d in eliminated:
            out[d] = 0.0
        elif d in halved:
            out[d] = v / 2.0
        else:
            out[d] = v
    total = sum(out.values())
    if total <= 0.0:
        return out
    return {d: v / total for d, v in out.items()}


def entropy_bits(ps: Iterable[float]) -> float:
    """Σ p·log₂p with 0·log0 = 0 (a negative quantity for distributions)."""
    total = 0.0
    for p in ps:
        if p > 0.0:
            total += p * math.log2(p)
    return total
