from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metareasoning.disambiguation import decide_sd, optimal_expected_utility
from metareasoning.evaluation import decide_first_action
from metareasoning.generators import random_knapsack, random_setcover, random_ssat
from metareasoning.model import KnapsackInstance, Leaf, SetCoverInstance
from metareasoning.oracles import solve_knapsack, solve_setcover, solve_ssat
from metareasoning.profiles import decide_pp
from metareasoning.reductions import (
    ae_gadget_parameters,
    knapsack_to_ae,
    knapsack_to_pp,
    setcover_to_sd,
    ssat_layout,
    ssat_to_sd,
)
from metareasoning.worked_examples import (
    knapsack_pair,
    knapsack_single,
    setcover_pair,
    ssat_contradiction,
    ssat_nature_only,
)

from strategies import seeds


def _shape(tree):
    (p1, first), (p2, second) = tree.children
    return p1, p2, first.value, second.value, tree.cost


class TestKnapsackToProfiles:
    def test_ramp(self):
        pp = knapsack_to_pp(knapsack_single())
        assert pp.profiles[0].breakpoints == ((0, 0), (2, 0), (5, 3))

    def test_budget_and_target(self):
        pp = knapsack_to_pp(knapsack_pair())
        assert (pp.budget, pp.target) == (5, 3)
        assert len(pp.profiles) == 2

    def test_yes_maps_to_yes(self):
        assert solve_knapsack(knapsack_pair())
        assert decide_pp(knapsack_to_pp(knapsack_pair()))


class TestKnapsackToEvaluation:
    def test_parameters(self):
        assert ae_gadget_parameters(knapsack_single()) == (F(1, 144), F(1, 24))

    def test_trees(self):
        ae = knapsack_to_ae(knapsack_single())
        assert len(ae.trees) == 4
        assert ae.budget == 3
        assert _shape(ae.trees[0]) == (F(1, 24), F(23, 24), 1, -1, 1)
        assert _shape(ae.trees[3]) == (F(1, 48), F(47, 48), 1, -1, 2)
        p1, p2, hi, lo, cost = _shape(ae.trees[1])
        assert p1 == F(23, 24) * (F(1, 24) + F(3, 144)) == F(23, 384)
        assert (p2, hi, lo, cost) == (1 - p1, 1, -1, 3)
        assert ae.trees[2] == Leaf(0)

    def test_labels(self):
        assert knapsack_to_ae(knapsack_pair()).labels == ("probe", "alternative", "safe", "item1", "item2")

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            knapsack_to_ae(KnapsackInstance((), 1, 1))

    def test_bit_length_linear(self):
        sizes = []
        for m in (2, 4, 8, 16):
            ae = knapsack_to_ae(KnapsackInstance(((1, 1),) * m, m, m))
            p = ae.trees[1].children[0][0]
            sizes.append(max(p.numerator.bit_length(), p.denominator.bit_length()))
        # linear growth: bounded by a constant per item, and doubling m at most doubles it (plus slack)
        for m, size in zip((2, 4, 8, 16), sizes):
            assert size <= 40 * m
        for a, b in zip(sizes, sizes[1:]):
            assert b <= 2 * a + 40


class TestSetCoverToDisambiguation:
    def test_gadget(self):
        sd = setcover_to_sd(setcover_pair())
        assert sd.states == ("1", "2", "b")
        assert [q.answers for q in sd.queries] == [
            (frozenset({"2", "b"}), frozenset({"1"})),
            (frozenset({"1", "b"}), frozenset({"2"})),
        ]
        assert (sd.budget, sd.target) == (2, F(1, 3))
        assert set(sd.prior.values()) == {F(1, 3)}
        assert sd.utility == {"1": 0, "2": 0, "b": 1}

    def test_yes(self):
        assert solve_setcover(setcover_pair())
        assert decide_sd(setcover_to_sd(setcover_pair()))

    def test_no(self):
        sc = SetCoverInstance(("1", "2"), (frozenset({"1"}),), 1)
        assert not solve_setcover(sc)
        assert not decide_sd(setcover_to_sd(sc))

    def test_reserved_label(self):
        with pytest.raises(ValueError):
            setcover_to_sd(SetCoverInstance(("b",), (frozenset({"b"}),), 1))


class TestSsatToDisambiguation:
    def test_layout(self):
        layout = ssat_layout(random_ssat(0, n=3, clauses=2))
        assert layout.triangle == ("v1_1", "v1_2", "v1_3", "v2_2", "v2_3", "v3_3")
        assert layout.row(2) == ("v2_2", "v2_3")
        assert layout.clause_states == ("c1", "c2")

    def test_nature_only_gadget(self):
        sd = ssat_to_sd(ssat_nature_only())
        assert set(sd.states) == {"c1", "b", "v1_1"}
        by_label = {q.label: q for q in sd.queries}
        assert by_label["qx1"].answers == (
            frozenset({"v1_1"}), frozenset({"c1"}), frozenset({"b"}), frozenset({"b", "c1"})
        )
        assert sd.utility["v1_1"] == 64
        assert sd.target == F(43, 2)
        assert sd.budget == 1

    def test_nature_only_value(self):
        s = ssat_nature_only()
        assert solve_ssat(s) == F(1, 2)
        value, policy = optimal_expected_utility(ssat_to_sd(s))
        assert value == F(43, 2)
        assert ssat_to_sd(s).queries[policy.query].label in ("qx1", "q-x1")

    def test_contradiction(self):
        s = ssat_contradiction()
        assert solve_ssat(s) < F(1, 2)
        assert not decide_sd(ssat_to_sd(s))


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 4))
def test_knapsack_images_valid(seed, m):
    k = random_knapsack(seed, items=m)
    pp = knapsack_to_pp(k)
    assert (pp.budget, pp.target) == (k.capacity + k.target, k.target)
    ae = knapsack_to_ae(k)
    assert len(ae.trees) == m + 3
    assert solve_knapsack(k) == decide_pp(pp)


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(0, 3), st.integers(0, 4))
def test_setcover_images_valid(seed, universe, subsets):
    sc = random_setcover(seed, universe=universe, subsets=subsets)
    sd = setcover_to_sd(sc)
    for q in sd.queries:
        assert all(q.consistent_count(s) == 1 for s in sd.states)
    assert solve_setcover(sc) == decide_sd(sd)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 2), st.integers(0, 3))
def test_ssat_images_valid(seed, n, clauses):
    s = random_ssat(seed, n=n, clauses=clauses)
    sd = ssat_to_sd(s)
    assert len(ssat_layout(s).triangle) == n * (n + 1) // 2
    assert len(sd.queries) == n * (n + 1) // 2 + 2 * n
    assert (solve_ssat(s) >= F(1, 2)) == decide_sd(sd)


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 3))
def test_knapsack_ae_equivalence(seed, m):
    k = random_knapsack(seed, items=m, max_cost=4, max_value=4)
    assert solve_knapsack(k) == decide_first_action(knapsack_to_ae(k), 0)
