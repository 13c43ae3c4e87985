"""Small hand-checkable instances: the motivating scenarios and tiny reduction gadgets.

The same instances are shipped as JSON under ``fixtures/`` at the
repository root; the test suite checks the files against these builders.
"""

from __future__ import annotations

from fractions import Fraction

from .model import (
    ActionEvaluationInstance,
    DisambiguationInstance,
    Internal,
    KnapsackInstance,
    Leaf,
    PerformanceProfilesInstance,
    PiecewiseLinearProfile,
    Query,
    SetCoverInstance,
    SsatInstance,
)

F = Fraction


def site_tree(prior, reward, hit_if_present, hit_if_absent, cost) -> Internal:
    """Depth-1 tree for one dig site probed by a noisy test.

    Left leaf: test positive; right leaf: test negative. Leaf values are
    ``reward * P(present | result)`` by Bayes' rule.
    """
    prior, reward = F(prior), F(reward)
    hit_if_present, hit_if_absent = F(hit_if_present), F(hit_if_absent)
    p_pos = hit_if_present * prior + hit_if_absent * (1 - prior)
    p_neg = 1 - p_pos
    children = []
    if p_pos:
        children.append((p_pos, Leaf(reward * hit_if_present * prior / p_pos)))
    if p_neg:
        children.append((p_neg, Leaf(reward * (1 - hit_if_present) * prior / p_neg)))
    return Internal(cost, tuple(children))


# gold / silver / copper sites; not digging is worth 1
DIG_SITES = {
    "A": dict(prior=F(1, 8), reward=5, hit_if_present=F(14, 15), hit_if_absent=F(1, 15), cost=2),
    "B": dict(prior=F(1, 2), reward=3, hit_if_present=1, hit_if_absent=0, cost=3),
    "C": dict(prior=F(1, 2), reward=2, hit_if_present=1, hit_if_absent=0, cost=2),
}


def dig_sites(budget=5) -> ActionEvaluationInstance:
    trees = tuple(site_tree(**DIG_SITES[name]) for name in ("A", "B", "C")) + (Leaf(1),)
    return ActionEvaluationInstance(trees, budget, ("A", "B", "C", "no-dig"))


def gap_robot(budget=2, target=F(5, 12)) -> DisambiguationInstance:
    """Staircase / hole / canyon with three yes-no tests."""
    states = ("S", "H", "C")
    s = frozenset
    queries = (
        Query((s({"S"}), s({"S", "H", "C"})), "inside-building"),
        Query((s({"S", "H"}), s({"H", "C"})), "hear-item-land"),
        Query((s({"S", "H"}), s({"S", "H", "C"})), "walk-around"),
    )
    return DisambiguationInstance(
        states,
        {x: F(1, 3) for x in states},
        {"S": F(2), "H": F(1), "C": F(0)},
        queries,
        budget,
        target,
    )


def routing_fleets(budget=5, target=F(5, 2)) -> PerformanceProfilesInstance:
    """Three fleets: two steady improvers and one with a 4-hour setup phase."""
    return PerformanceProfilesInstance(
        (
            PiecewiseLinearProfile(((0, 0), (3, F(3, 2)))),
            PiecewiseLinearProfile(((0, 0), (2, 1))),
            PiecewiseLinearProfile(((0, 0), (4, 0), (6, 4))),
        ),
        budget,
        target,
    )


def knapsack_single() -> KnapsackInstance:
    return KnapsackInstance(((2, 3),), 2, 3)


def knapsack_pair() -> KnapsackInstance:
    return KnapsackInstance(((1, 2), (2, 3)), 2, 3)


def setcover_pair() -> SetCoverInstance:
    return SetCoverInstance(("1", "2"), (frozenset({"1"}), frozenset({"2"})), 2)


def ssat_nature_only() -> SsatInstance:
    return SsatInstance(1, (frozenset({"y1"}),))


def ssat_contradiction() -> SsatInstance:
    return SsatInstance(1, (frozenset({"y1"}), frozenset({"-y1"})))


FIXTURES = {
    "dig-sites.json": dig_sites,
    "gap-robot.json": gap_robot,
    "routing-fleets.json": routing_fleets,
    "knapsack-single.json": knapsack_single,
    "knapsack-pair.json": knapsack_pair,
    "setcover-pair.json": setcover_pair,
    "ssat-nature-only.json": ssat_nature_only,
    "ssat-contradiction.json": ssat_contradiction,
}
