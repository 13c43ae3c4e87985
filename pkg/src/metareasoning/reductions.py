"""Instance transformers from the classic source problems to the metareasoning ones.

* KNAPSACK -> performance-profile allocation
* KNAPSACK -> action evaluation (first-step question on tree 0)
* SET-COVER -> state disambiguation with one consistent answer per state and query
* SSAT -> state disambiguation
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .model import (
    ActionEvaluationInstance,
    DisambiguationInstance,
    KnapsackInstance,
    Leaf,
    Literal,
    PerformanceProfilesInstance,
    PiecewiseLinearProfile,
    Query,
    SetCoverInstance,
    SsatInstance,
    binary_tree,
)

__all__ = [
    "knapsack_to_pp",
    "knapsack_to_ae",
    "ae_gadget_parameters",
    "setcover_to_sd",
    "BLANK_STATE",
    "SsatGadgetLayout",
    "ssat_layout",
    "ssat_to_sd",
    "REDUCTIONS",
]

BLANK_STATE = "b"


def knapsack_to_pp(k: KnapsackInstance) -> PerformanceProfilesInstance:
    """One ramp profile per item: flat 0 up to its cost, slope 1 for its value, then flat."""
    profiles = tuple(
        PiecewiseLinearProfile(((0, 0), (c, 0), (c + v, v))) for c, v in k.items
    )
    return PerformanceProfilesInstance(profiles, k.capacity + k.target, k.target)


def ae_gadget_parameters(k: KnapsackInstance) -> tuple[Fraction, Fraction]:
    """``(delta, epsilon)`` with delta = 1/(16 m V_tot^2) and epsilon = 2 delta V_tot."""
    m = len(k.items)
    total = sum(k.values)
    delta = Fraction(1, 16 * m * total * total)
    return delta, 2 * delta * total


def knapsack_to_ae(k: KnapsackInstance) -> ActionEvaluationInstance:
    """Depth-0/1 trees with leaf values in {-1, 0, 1}; budget ``capacity + 1``.

    Tree 0 is the cheap probe, tree 1 the expensive all-budget alternative,
    tree 2 the safe value-0 action, and tree ``i + 3`` stands for item ``i``.
    """
    if not k.items:
        raise ValueError("knapsack_to_ae needs at least one item")
    m = len(k.items)
    delta, eps = ae_gadget_parameters(k)
    trees = [
        binary_tree(eps, 1, -1, 1),
        binary_tree((1 - eps) ** m * (eps + delta * k.target), 1, -1, k.capacity + 1),
        Leaf(0),
    ]
    trees.extend(binary_tree(delta * v, 1, -1, c) for c, v in k.items)
    labels = ["probe", "alternative", "safe"] + [f"item{i + 1}" for i in range(m)]
    return ActionEvaluationInstance(tuple(trees), k.capacity + 1, tuple(labels))


def setcover_to_sd(sc: SetCoverInstance) -> DisambiguationInstance:
    """States are the universe plus a blank state worth 1; query ``i`` splits off subset ``i``."""
    if BLANK_STATE in sc.universe:
        raise ValueError(f"universe label {BLANK_STATE!r} is reserved for the blank state")
    states = sc.universe + (BLANK_STATE,)
    everything = frozenset(states)
    r = len(states)
    queries = tuple(
        Query((everything - t, t), f"q{i + 1}") for i, t in enumerate(sc.subsets)
    )
    return DisambiguationInstance(
        states=states,
        prior={s: Fraction(1, r) for s in states},
        utility={s: Fraction(int(s == BLANK_STATE)) for s in states},
        queries=queries,
        budget=sc.bound,
        target=Fraction(1, r),
    )


@dataclass(frozen=True)
class SsatGadgetLayout:
    """Labels of the SSAT gadget: clause states, the blank state, the triangle ``v_ij``."""

    n: int
    clause_states: tuple[str, ...]
    blank: str
    triangle: tuple[str, ...]

    @property
    def states(self) -> tuple[str, ...]:
        return self.clause_states + (self.blank,) + self.triangle

    def row(self, i: int) -> tuple[str, ...]:
        return tuple(f"v{i}_{j}" for j in range(i, self.n + 1))


def ssat_layout(s: SsatInstance) -> SsatGadgetLayout:
    triangle = tuple(f"v{i}_{j}" for i in range(1, s.n + 1) for j in range(i, s.n + 1))
    clauses = tuple(f"c{i + 1}" for i in range(len(s.clauses)))
    return SsatGadgetLayout(s.n, clauses, BLANK_STATE, triangle)


def ssat_to_sd(s: SsatInstance) -> DisambiguationInstance:
    """State-disambiguation gadget whose optimum reaches its target iff the SSAT value is >= 1/2.

    Asking ``x{i}``/``-x{i}`` plays the assignment of ``x_i``; its third and
    fourth answers play nature setting ``y_i`` true and false. Each triangle
    state is worth enough that every optimal policy must always identify it.
    """
    layout = ssat_layout(s)
    states = layout.states
    everything = frozenset(states)
    clause_set = frozenset(layout.clause_states)

    def containing(lit: Literal) -> frozenset[str]:
        return frozenset(name for name, c in zip(layout.clause_states, s.clauses) if lit in c)

    queries = [Query((frozenset({v}), everything - {v}), f"q{v[1:]}") for v in layout.triangle]
    for i in range(1, s.n + 1):
        row = frozenset(layout.row(i))
        y_true, y_false = Literal("y", i), Literal("y", i, True)
        for x in (Literal("x", i), Literal("x", i, True)):
            rest = everything - row - containing(x)
            queries.append(
                Query(
                    (row, clause_set, rest - containing(y_true), rest - containing(y_false)),
                    f"q{x}",
                )
            )
    h = 2 * prod(len(q.answers) for q in queries)
    r = len(states)
    v = len(layout.triangle)
    utility = {c: Fraction(0) for c in layout.clause_states}
    utility[layout.blank] = Fraction(1)
    utility.update({t: Fraction(h) for t in layout.triangle})
    return DisambiguationInstance(
        states=states,
        prior={st: Fraction(1, r) for st in states},
        utility=utility,
        queries=tuple(queries),
        budget=s.n,
        target=Fraction(2 * v * h + 1, 2 * r),
    )


REDUCTIONS = {
    "knapsack-pp": ("knapsack", "performance-profiles", knapsack_to_pp),
    "knapsack-ae": ("knapsack", "action-evaluation", knapsack_to_ae),
    "setcover-sd": ("setcover", "state-disambiguation", setcover_to_sd),
    "ssat-sd": ("ssat", "state-disambiguation", ssat_to_sd),
}
