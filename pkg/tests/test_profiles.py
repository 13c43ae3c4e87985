from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metareasoning.generators import random_knapsack
from metareasoning.model import PerformanceProfilesInstance, PiecewiseLinearProfile, profile_eval
from metareasoning.oracles import solve_knapsack
from metareasoning.profiles import (
    ConcavityError,
    concave_allocation,
    decide_pp,
    grid_oracle_pp,
    optimal_allocation,
)
from metareasoning.reductions import knapsack_to_pp
from metareasoning.worked_examples import routing_fleets

from strategies import profiles, seeds

P = PiecewiseLinearProfile


def _instance(ps, budget, target=0):
    return PerformanceProfilesInstance(tuple(ps), budget, target)


class TestOptimalAllocation:
    # expected values frozen from grid_oracle_pp at step 1/4
    @pytest.mark.parametrize("budget, value, times", [(5, F(5, 2), (3, 2, 0)), (6, 4, (0, 0, 6))])
    def test_routing_fleets(self, budget, value, times):
        inst = routing_fleets(budget)
        assert grid_oracle_pp(inst, F(1, 4)) == value
        alloc = optimal_allocation(inst)
        assert alloc.value == value
        assert alloc.times == times

    def test_single_profile_takes_everything(self):
        inst = _instance([P(((0, 0), (5, 5)))], 5, 5)
        alloc = optimal_allocation(inst)
        assert alloc.times == (5,) and alloc.value == 5

    def test_zero_budget(self):
        inst = routing_fleets(0)
        assert optimal_allocation(inst).value == 0

    def test_fractional_fill(self):
        # only half of the second ramp is affordable after paying its setup
        inst = _instance([P(((0, 0), (1, 0), (3, 4)))], 2)
        assert optimal_allocation(inst).value == 2

    def test_lexicographic_tie_break(self):
        inst = _instance([P(((0, 0), (2, 2))), P(((0, 0), (2, 2)))], 2)
        alloc = optimal_allocation(inst)
        assert alloc.value == 2
        assert alloc.times == (0, 2)

    def test_allocation_invariants(self):
        inst = routing_fleets(F(11, 2))
        alloc = optimal_allocation(inst)
        assert alloc.total_time <= inst.budget
        assert alloc.value == sum(profile_eval(p, t) for p, t in zip(inst.profiles, alloc.times))

    def test_constant_profile(self):
        inst = _instance([P(((0, 3),)), P(((0, 0), (1, 1)))], 1)
        assert optimal_allocation(inst).value == 4


class TestDecide:
    def test_knapsack_yes(self):
        from metareasoning.model import KnapsackInstance

        assert decide_pp(knapsack_to_pp(KnapsackInstance(((1, 2), (2, 3)), 2, 3)))

    def test_knapsack_no(self):
        from metareasoning.model import KnapsackInstance

        assert not decide_pp(knapsack_to_pp(KnapsackInstance(((1, 2),), 1, 3)))

    def test_zero_target(self):
        assert decide_pp(_instance([P(((0, 0), (3, 1)))], 0, 0))


class TestConcave:
    def test_greedy_example(self):
        inst = _instance([P(((0, 0), (10, 10))), P(((0, 0), (1, 2), (5, 2)))], 3)
        # frozen from the grid oracle at step 1
        assert grid_oracle_pp(inst, 1) == 4
        alloc = concave_allocation(inst)
        assert alloc.times == (2, 1) and alloc.value == 4

    def test_single_linear(self):
        alloc = concave_allocation(_instance([P(((0, 0), (10, 10)))], 7))
        assert alloc.times == (7,) and alloc.value == 7

    def test_rejects_convex_kink(self):
        with pytest.raises(ConcavityError, match="profile 0.*segment 0"):
            concave_allocation(_instance([P(((0, 0), (1, 1), (2, 3)))], 1))


class TestGridOracle:
    def test_step_must_divide_budget(self):
        with pytest.raises(ValueError):
            grid_oracle_pp(routing_fleets(5), 2)

    def test_step_positive(self):
        with pytest.raises(ValueError):
            grid_oracle_pp(routing_fleets(5), 0)

    def test_flat_zero(self):
        assert grid_oracle_pp(_instance([P(((0, 0), (4, 0)))], 4), F(1, 2)) == 0

    def test_zero_budget(self):
        assert grid_oracle_pp(routing_fleets(0), 1) == 0


instances = st.builds(
    _instance,
    st.lists(profiles(), min_size=1, max_size=3),
    st.integers(0, 8),
)


@settings(max_examples=60, deadline=None)
@given(instances)
def test_dominates_grid(inst):
    assert optimal_allocation(inst).value >= grid_oracle_pp(inst, F(1, 2))


@settings(max_examples=60, deadline=None)
@given(instances)
def test_matches_fine_grid_when_lattice_contains_breakpoints(inst):
    lattice = F(1, 2)
    assert all((t / lattice).denominator == 1 for p in inst.profiles for t in p.times)
    assert optimal_allocation(inst).value == grid_oracle_pp(inst, lattice)


@settings(max_examples=60, deadline=None)
@given(instances, st.integers(0, 4))
def test_monotone_in_budget(inst, extra):
    more = inst.with_budget(inst.budget + extra)
    assert optimal_allocation(inst).value <= optimal_allocation(more).value


@settings(max_examples=60, deadline=None)
@given(st.lists(profiles(concave=True), min_size=1, max_size=4), st.integers(0, 10))
def test_concave_agrees_with_general(ps, budget):
    inst = _instance(ps, budget)
    assert concave_allocation(inst).value == optimal_allocation(inst).value


@settings(max_examples=80, deadline=None)
@given(seeds, st.integers(1, 4))
def test_knapsack_equivalence(seed, m):
    k = random_knapsack(seed, items=m, max_cost=5, max_value=5)
    assert decide_pp(knapsack_to_pp(k)) == solve_knapsack(k)
