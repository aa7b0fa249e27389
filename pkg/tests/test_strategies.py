from __future__ import annotations

import pytest

from kbdebug.hstree import hs_tree_diagnoses
from kbdebug.probability import (FaultModel, axiom_probabilities,
                                 bayes_update, prior_belief)
from kbdebug.queries import Partition, generate_query_pool
from kbdebug.strategies import (
    RioState,
    StrategyChoice,
    elimination_rate,
    query_cautiousness,
    rio_update,
    score_entropy,
    score_split,
    select_query,
)

APPROX = 1e-3


def part(d_plus, d_minus, d_zero=()):
    mk = lambda groups: [frozenset(g) for g in groups]
    return Partition.of(mk(d_plus), mk(d_minus), mk(d_zero))


def singles(n):
    return [frozenset({i}) for i in range(1, n + 1)]


def chain_partitions():
    """The three discriminating splits of the four chain diagnoses."""
    q1 = part([[2], [3], [4]], [[1]])
    q2 = part([[3], [4]], [[1], [2]])
    q3 = part([[4]], [[1], [2], [3]])
    return q1, q2, q3


def team_pool(team):
    model = FaultModel.from_dict(team.fault_model)
    leading, _ = hs_tree_diagnoses(team, axiom_probabilities(model, team.kb))
    belief = prior_belief(model, team.kb, leading)
    return generate_query_pool(team, leading), belief


class TestEntropyScore:
    def test_uniform_belief_scores(self):
        belief = {d: 0.25 for d in singles(4)}
        q1, q2, q3 = chain_partitions()
        assert score_entropy(q1, belief) == pytest.approx(0.1887, abs=APPROX)
        assert score_entropy(q2, belief) == pytest.approx(0.0, abs=APPROX)
        assert score_entropy(q3, belief) == pytest.approx(0.1887, abs=APPROX)

    def test_skewed_belief_scores(self, chain):
        model = FaultModel(default=0.01, axioms={1: 0.1})
        belief = prior_belief(model, chain.kb, singles(4))
        assert belief[frozenset({1})] == pytest.approx(11 / 14)
        q1, q2, q3 = chain_partitions()
        assert score_entropy(q1, belief) == pytest.approx(0.250, abs=APPROX)
        assert score_entropy(q2, belief) == pytest.approx(0.408, abs=APPROX)
        assert score_entropy(q3, belief) == pytest.approx(0.629, abs=APPROX)

    def test_mildly_skewed_belief_keeps_the_same_argmin(self, chain):
        model = FaultModel(default=0.01, axioms={1: 0.025})
        belief = prior_belief(model, chain.kb, singles(4))
        scores = [score_entropy(q, belief) for q in chain_partitions()]
        assert scores[0] == min(scores)
        assert scores[0] < scores[1] < scores[2]

    def test_scores_after_an_eliminating_answer(self):
        # a no on the even split zeroes half the candidates; the stale
        # partitions then score (0, 1, 1) against the updated belief
        belief = {d: 0.25 for d in singles(4)}
        q1, q2, q3 = chain_partitions()
        belief = bayes_update(belief, q2, False)
        assert score_entropy(q1, belief) == pytest.approx(0.0)
        assert score_entropy(q2, belief) == pytest.approx(1.0)
        assert score_entropy(q3, belief) == pytest.approx(1.0)

    def test_uncommitted_mass_adds_a_penalty(self):
        a, b, c = singles(3)
        belief = {a: 0.5, b: 0.25, c: 0.25}
        committed = score_entropy(part([[1]], [[2], [3]]), belief)
        uncommitted = score_entropy(part([[1]], [[2]], [[3]]), belief)
        assert committed == pytest.approx(0.0)
        assert uncommitted > committed


class TestSplitScore:
    def test_even_split_scores_zero(self):
        assert score_split(part([[2], [4], [6]], [[1], [3], [5]])) == 0

    def test_imbalance_and_uncommitted_both_count(self):
        assert score_split(part([[2], [3], [4]], [[1]])) == 2
        assert score_split(part([[1]], [[2]], [[3]])) == 1
        assert score_split(part([[1]], [[2], [3], [4]], [[5], [6]])) == 4


class TestCautiousnessAndElimination:
    def test_worst_case_elimination_fraction(self):
        assert query_cautiousness(part([[4], [6]], [[1], [2], [3], [5]]), 6) \
            == pytest.approx(2 / 6)
        assert query_cautiousness(
            part([[1], [2], [3], [4], [6]], [[5]]), 6) == pytest.approx(1 / 6)
        assert query_cautiousness(
            part([[2], [4], [6]], [[1], [3], [5]]), 6) == pytest.approx(3 / 6)

    def test_elimination_rate_depends_on_the_answer(self):
        even = part([[2], [4], [6]], [[1], [3], [5]])
        assert elimination_rate(even, "yes", 6) == pytest.approx(0.5)
        assert elimination_rate(even, "no", 6) == pytest.approx(0.5)
        lopsided = part([[2], [3], [4]], [[1]])
        assert elimination_rate(lopsided, "no", 4) == pytest.approx(3 / 4)
        assert elimination_rate(lopsided, "yes", 4) == pytest.approx(1 / 4)


class TestRioUpdate:
    def test_half_elimination_lowers_cautiousness(self):
        state = RioState(c=0.4, c_min=0.0, c_max=0.5)
        even = part([[2], [4], [6]], [[1], [3], [5]])
        after = rio_update(state, even, "yes", 6)
        assert after.c == pytest.approx(0.4 - 1 / 6)

    def test_weak_elimination_raises_cautiousness(self):
        state = RioState(c=0.1, c_min=0.0, c_max=0.5)
        lopsided = part([[1], [2], [3], [4], [6]], [[5]])
        after = rio_update(state, lopsided, "yes", 6)  # eliminated 1 of 6
        assert after.c == pytest.approx(0.1 + 1 / 6)

    def test_update_clamps_to_the_bounds(self):
        near_top = RioState(c=0.49, c_min=0.0, c_max=0.5)
        weak = part([[1]], [[2], [3], [4], [5], [6]])
        assert rio_update(near_top, weak, "no", 6).c == pytest.approx(0.5)
        near_bottom = RioState(c=0.05, c_min=0.0, c_max=0.5)
        strong = part([[2], [3], [4], [5], [6]], [[1]])
        assert rio_update(near_bottom, strong, "no", 6).c == pytest.approx(0.0)

    def test_attainable_half_exactly_means_no_change(self):
        # floor(n/2 - epsilon)/n is the attainable half; matching it
        # leaves the cautiousness alone
        state = RioState(c=0.3, c_min=0.0, c_max=0.5)
        balanced = part([[2], [4]], [[1], [3]], [[5], [6]])
        assert rio_update(state, balanced, "yes", 6).c == pytest.approx(0.3)


class TestRioStateValidation:
    def test_cautiousness_must_lie_within_its_bounds(self):
        with pytest.raises(ValueError):
            RioState(c=0.6, c_min=0.0, c_max=0.5)
        with pytest.raises(ValueError):
            RioState(c=-0.1)

    def test_epsilon_must_be_a_proper_fraction_of_a_half(self):
        with pytest.raises(ValueError):
            RioState(epsilon=0.5)
        with pytest.raises(ValueError):
            RioState(epsilon=0.0)

    def test_round_trip(self):
        state = RioState(c=0.4, c_min=0.0, c_max=0.5, epsilon=0.3)
        assert RioState.from_dict(state.to_dict()) == state
        assert RioState.from_dict({}) == RioState()


class TestStrategyChoice:
    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            StrategyChoice(kind="greedy")

    def test_rio_state_only_applies_to_rio(self):
        with pytest.raises(ValueError):
            StrategyChoice(kind="entropy", rio=RioState())
        assert StrategyChoice(kind="rio").rio == RioState()

    def test_round_trip_and_seed_alias(self):
        choice = StrategyChoice(kind="rio", rio=RioState(c=0.3), rng_seed=7)
        assert StrategyChoice.from_dict(choice.to_dict()) == choice
        assert StrategyChoice.from_dict({"kind": "random", "seed": 3}) \
            == StrategyChoice(kind="random", rng_seed=3)


class TestSelection:
    def test_entropy_picks_the_even_split(self, chain):
        leading = singles(4)
        belief = {d: 0.25 for d in leading}
        pool = generate_query_pool(chain, leading)
        query, partition = select_query(
            pool, belief, StrategyChoice(kind="entropy"))
        assert query.texts == ("C(w)",)
        assert partition == part([[3], [4]], [[1], [2]])

    def test_split_breaks_score_ties_lexicographically(self, team):
        pool, belief = team_pool(team)
        query, _ = select_query(pool, belief, StrategyChoice(kind="split"))
        # several exact halvings tie at score 0; the smallest serialized
        # query wins
        assert query.texts == ("DeptEmployee(s)",)

    def test_entropy_on_the_team_pool(self, team):
        pool, belief = team_pool(team)
        query, _ = select_query(pool, belief, StrategyChoice(kind="entropy"))
        assert query.texts == ("DeptEmployee(s)", "Student(s)")

    def test_high_cautiousness_overrides_the_entropy_best(self, team):
        pool, belief = team_pool(team)
        choice = StrategyChoice(kind="rio",
                                rio=RioState(c=0.4, c_min=0.0, c_max=0.5))
        query, partition = select_query(pool, belief, choice)
        assert query_cautiousness(partition, 6) == pytest.approx(0.5)
        assert query.texts == ("DeptEmployee(s)",)

    def test_lower_cautiousness_keeps_the_entropy_best(self, team):
        pool, belief = team_pool(team)
        for c in (0.3, 0.1):
            choice = StrategyChoice(
                kind="rio", rio=RioState(c=c, c_min=0.0, c_max=0.5))
            query, partition = select_query(pool, belief, choice)
            assert query.texts == ("DeptEmployee(s)", "Student(s)")
            assert query_cautiousness(partition, 6) >= c

    def test_random_is_reproducible_per_seed_and_salt(self, team):
        pool, belief = team_pool(team)
        choice = StrategyChoice(kind="random", rng_seed=11)
        first, _ = select_query(pool, belief, choice, salt=0)
        again, _ = select_query(pool, belief, choice, salt=0)
        assert first is again
        picks = {select_query(pool, belief, choice, salt=s)[0].texts
                 for s in range(10)}
        assert len(picks) > 1  # later rounds explore the pool

    def test_empty_pool_rejected(self):
        with pytest.raises(ValueError):
            select_query([], {}, StrategyChoice(kind="entropy"))
