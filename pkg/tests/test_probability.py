from __future__ import annotations

from itertools import combinations

import pytest

from kbdebug.bruteforce import brute_force_minimal_diagnoses
from kbdebug.probability import (
    FaultModel,
    answer_likelihood,
    axiom_fault_prob,
    axiom_probabilities,
    bayes_update,
    diagnosis_prior,
    entropy_bits,
    normalize,
    prior_belief,
)
from kbdebug.queries import Partition

from conftest import load_fixture

APPROX = 1e-3


def by_ids(belief):
    return {tuple(sorted(d)): v for d, v in belief.items()}


class TestAxiomProbabilities:
    def test_element_formula(self, layered):
        model = FaultModel.from_dict(layered.fault_model)
        probs = axiom_probabilities(model, layered.kb)
        assert probs[1] == pytest.approx(0.0019, abs=1e-4)
        assert probs[2] == pytest.approx(0.108, abs=APPROX)
        assert probs[3] == pytest.approx(0.012, abs=1e-4)
        assert probs[4] == pytest.approx(0.051, abs=1e-4)
        assert probs[5] == pytest.approx(0.001, abs=1e-4)

    def test_uncovered_elements_fall_back_to_default(self, team):
        model = FaultModel(elements={}, default=0.5)
        for ax in team.kb:
            assert axiom_fault_prob(model, ax) == 0.5

    def test_per_axiom_override_wins(self, team):
        model = FaultModel.from_dict(team.fault_model)
        probs = axiom_probabilities(model, team.kb)
        assert probs[5] == pytest.approx(0.0909091)
        assert probs[6] == pytest.approx(0.1304348)
        assert probs[1] == pytest.approx(0.000999001)

    def test_assertional_axioms_use_default(self, intro):
        model = FaultModel(elements={"sub": 0.9}, default=0.123)
        by_id = axiom_probabilities(model, intro.kb)
        assert by_id[5] == 0.123  # the ground fact


class TestPriors:
    def test_layered_normalized_priors(self, layered):
        model = FaultModel.from_dict(layered.fault_model)
        belief = by_ids(prior_belief(model, layered.kb,
                                     brute_force_minimal_diagnoses(layered)))
        assert belief[(1,)] == pytest.approx(0.0970, abs=APPROX)
        assert belief[(3,)] == pytest.approx(0.5874, abs=APPROX)
        assert belief[(4, 5)] == pytest.approx(0.0026, abs=APPROX)
        assert belief[(2, 4)] == pytest.approx(0.3130, abs=APPROX)

    def test_team_normalized_priors(self, team):
        model = FaultModel.from_dict(team.fault_model)
        belief = by_ids(prior_belief(model, team.kb,
                                     brute_force_minimal_diagnoses(team)))
        for i in range(1, 5):
            assert belief[(i,)] == pytest.approx(0.003937, abs=APPROX)
        assert belief[(5,)] == pytest.approx(0.3937, abs=APPROX)
        assert belief[(6,)] == pytest.approx(0.5906, abs=APPROX)

    def test_priors_over_all_subsets_sum_to_one(self, chain):
        # the prior is a product distribution over the full power set
        model = FaultModel.from_dict(chain.fault_model)
        probs = axiom_probabilities(model, chain.kb)
        ids = sorted(chain.kb_ids)
        total = 0.0
        for size in range(len(ids) + 1):
            for combo in combinations(ids, size):
                total += diagnosis_prior(probs, ids, frozenset(combo))
        assert total == pytest.approx(1.0, abs=1e-9)


class TestBelief:
    def test_normalize_sums_to_one(self):
        belief = normalize({frozenset({1}): 3.0, frozenset({2}): 1.0})
        assert sum(belief.values()) == pytest.approx(1.0)
        assert belief[frozenset({1})] == pytest.approx(0.75)

    def test_normalize_zero_mass_becomes_uniform(self):
        belief = normalize({frozenset({1}): 0.0, frozenset({2}): 0.0})
        assert belief[frozenset({1})] == pytest.approx(0.5)

    def test_layered_posteriors_after_two_yes_answers(self, layered):
        model = FaultModel.from_dict(layered.fault_model)
        diagnoses = brute_force_minimal_diagnoses(layered)
        belief = prior_belief(model, layered.kb, diagnoses)
        d1, d2 = frozenset({1}), frozenset({3})
        d3, d4 = frozenset({4, 5}), frozenset({2, 4})
        # "is the concept-B inclusion wanted" splits off the most likely
        belief = bayes_update(belief, Partition((d1, d3, d4), (d2,), ()), True)
        b = by_ids(belief)
        assert b[(1,)] == pytest.approx(0.2352, abs=APPROX)
        assert b[(3,)] == 0.0
        assert b[(4, 5)] == pytest.approx(0.0063, abs=APPROX)
        assert b[(2, 4)] == pytest.approx(0.7585, abs=APPROX)
        belief = bayes_update(belief, Partition((d2, d3, d4), (d1,), ()), True)
        b = by_ids(belief)
        assert b[(1,)] == 0.0
        assert b[(4, 5)] == pytest.approx(0.0082, abs=APPROX)
        assert b[(2, 4)] == pytest.approx(0.9918, abs=APPROX)

    def test_update_halves_uncommitted_and_renormalizes(self):
        a, b, c = frozenset({1}), frozenset({2}), frozenset({3})
        belief = {a: 0.5, b: 0.25, c: 0.25}
        out = bayes_update(belief, Partition((a,), (b,), (c,)), True)
        assert out[a] == pytest.approx(0.8)
        assert out[b] == 0.0
        assert out[c] == pytest.approx(0.2)
        assert sum(out.values()) == pytest.approx(1.0)

    def test_contradicting_answer_returns_zero_mass(self):
        a, b = frozenset({1}), frozenset({2})
        belief = {a: 1.0, b: 0.0}
        out = bayes_update(belief, Partition((b,), (a,), ()), True)
        assert sum(out.values()) == 0.0

    def test_answer_likelihoods_sum_to_one(self):
        a, b, c = frozenset({1}), frozenset({2}), frozenset({3})
        belief = {a: 0.5, b: 0.3, c: 0.2}
        partition = Partition((a,), (b,), (c,))
        yes = answer_likelihood(belief, partition, True)
        no = answer_likelihood(belief, partition, False)
        assert yes == pytest.approx(0.6)
        assert no == pytest.approx(0.4)
        assert yes + no == pytest.approx(1.0)


def test_entropy_bits_handles_zero():
    assert entropy_bits([0.5, 0.5]) == pytest.approx(-1.0)
    assert entropy_bits([1.0, 0.0]) == 0.0
