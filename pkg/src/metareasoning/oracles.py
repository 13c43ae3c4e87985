"""Deliberately naive reference solvers and the reduction checker.

Nothing in here calls into the optimized solvers except
:func:`verify_reduction`, which by design runs one of each. The exhaustive
policy enumerators re-derive the metareasoning optima from scratch so the
memoized solvers can be checked against them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, Optional

from .model import (
    ActionEvaluationInstance,
    DisambiguationInstance,
    Internal,
    KnapsackInstance,
    Leaf,
    Literal,
    SetCoverInstance,
    SsatInstance,
)

__all__ = [
    "solve_knapsack",
    "solve_setcover",
    "solve_ssat",
    "exhaustive_ae_value",
    "exhaustive_ae_first_step_values",
    "exhaustive_sd_value",
    "enumerate_sd_policies",
    "sd_policy_value",
    "ReductionReport",
    "verify_reduction",
    "corrupt_target",
]


def solve_knapsack(k: KnapsackInstance) -> bool:
    m = len(k.items)
    for mask in range(1 << m):
        chosen = [k.items[i] for i in range(m) if mask >> i & 1]
        if sum(c for c, _ in chosen) <= k.capacity and sum(v for _, v in chosen) >= k.target:
            return True
    return False


def solve_setcover(sc: SetCoverInstance) -> bool:
    """Is there a choice of ``min(bound, |subsets|)`` subsets covering the universe?

    Covers are upward closed, so exactly-M and at-most-M coincide once M
    does not exceed the number of subsets.
    """
    universe = set(sc.universe)
    size = min(sc.bound, len(sc.subsets))
    for combo in itertools.combinations(sc.subsets, size):
        if universe <= set().union(*combo):
            return True
    return False


def solve_ssat(s: SsatInstance) -> Fraction:
    """Maximum satisfaction probability: we set x_1, nature flips y_1, we set x_2, ..."""

    def satisfied(assignment: dict[Literal, bool]) -> bool:
        for clause in s.clauses:
            if not any(assignment[Literal(l.var, l.index)] != l.negated for l in clause):
                return False
        return True

    def play(i: int, assignment: dict) -> Fraction:
        if i > s.n:
            return Fraction(int(satisfied(assignment)))
        best = Fraction(0)
        for xv in (True, False):
            total = Fraction(0)
            for yv in (True, False):
                nxt = dict(assignment)
                nxt[Literal("x", i)] = xv
                nxt[Literal("y", i)] = yv
                total += play(i + 1, nxt)
            best = max(best, total / 2)
        return best

    return play(1, {})


# --------------------------------------------------------------------------
# exhaustive policy enumeration, action evaluation


def _ae_policies(nodes: tuple, budget: Fraction, first: Optional[int] = None) -> Iterator[Any]:
    """Every contingency plan as a nested ``("stop",)`` / ``("eval", i, [subplans])`` value."""
    if first is None:
        yield ("stop",)
    candidates = range(len(nodes)) if first is None else [first]
    for i in candidates:
        node = nodes[i]
        if isinstance(node, Leaf) or node.cost > budget:
            continue
        rest = budget - node.cost
        per_child = [
            list(_ae_policies(nodes[:i] + (child,) + nodes[i + 1:], rest))
            for _, child in node.children
        ]
        for combo in itertools.product(*per_child):
            yield ("eval", i, list(combo))


def _leaf_mean(node) -> Fraction:
    if isinstance(node, Leaf):
        return node.value
    return sum((p * _leaf_mean(c) for p, c in node.children), Fraction(0))


def _ae_plan_value(plan, nodes: tuple) -> Fraction:
    if plan[0] == "stop":
        return max(_leaf_mean(n) for n in nodes)
    _, i, subplans = plan
    total = Fraction(0)
    for (p, child), sub in zip(nodes[i].children, subplans):
        total += p * _ae_plan_value(sub, nodes[:i] + (child,) + nodes[i + 1:])
    return total


def exhaustive_ae_value(instance: ActionEvaluationInstance) -> Fraction:
    """Best value over an explicit enumeration of all contingency plans."""
    nodes = tuple(instance.trees)
    return max(_ae_plan_value(plan, nodes) for plan in _ae_policies(nodes, instance.budget))


def exhaustive_ae_first_step_values(instance: ActionEvaluationInstance) -> dict[int, Fraction]:
    nodes = tuple(instance.trees)
    out = {}
    for i, node in enumerate(nodes):
        if isinstance(node, Internal) and node.cost <= instance.budget:
            out[i] = max(_ae_plan_value(p, nodes) for p in _ae_policies(nodes, instance.budget, i))
    return out


# --------------------------------------------------------------------------
# exhaustive policy enumeration, state disambiguation


def enumerate_sd_policies(
    instance: DisambiguationInstance,
    depth: Optional[int] = None,
    allow_repeats: bool = False,
    used: frozenset = frozenset(),
):
    """All query trees of depth at most ``depth`` (default: the budget).

    A plan is ``None`` (stop) or ``(query, [subplan per answer])``.
    """
    depth = instance.budget if depth is None else depth
    yield None
    if depth == 0:
        return
    for q, query in enumerate(instance.queries):
        if q in used and not allow_repeats:
            continue
        subplans = list(enumerate_sd_policies(instance, depth - 1, allow_repeats, used | {q}))
        for combo in itertools.product(subplans, repeat=len(query.answers)):
            yield (q, list(combo))


def sd_policy_value(instance: DisambiguationInstance, plan) -> Fraction:
    """Sum over states of prior x P(identified) x utility, by forward simulation per state."""
    total = Fraction(0)
    for truth in instance.states:
        found = _identify_prob(instance, plan, truth, frozenset(instance.states))
        total += instance.prior[truth] * found * instance.utility[truth]
    return total


def _identify_prob(instance, plan, truth: str, alive: frozenset) -> Fraction:
    if plan is None:
        return Fraction(int(alive == {truth}))
    q, subplans = plan
    answers = instance.queries[q].answers
    consistent = [j for j, a in enumerate(answers) if truth in a]
    return sum(
        (_identify_prob(instance, subplans[j], truth, alive & answers[j]) for j in consistent),
        Fraction(0),
    ) / len(consistent)


def exhaustive_sd_value(instance: DisambiguationInstance, allow_repeats: bool = False) -> Fraction:
    plans = enumerate_sd_policies(instance, allow_repeats=allow_repeats)
    return max(sd_policy_value(instance, plan) for plan in plans)


# --------------------------------------------------------------------------
# reduction checking


@dataclass
class ReductionReport:
    kind: str
    source_answer: bool
    target_answer: bool
    witness: Optional[dict] = None
    details: dict = field(default_factory=dict)

    @property
    def equivalent(self) -> bool:
        return self.source_answer == self.target_answer

    def to_json(self) -> dict:
        out = {
            "reduction": self.kind,
            "source_answer": self.source_answer,
            "target_answer": self.target_answer,
            "equivalent": self.equivalent,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        out.update(self.details)
        return out


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _source_answer(source_kind: str, source) -> tuple[bool, dict]:
    if source_kind == "knapsack":
        return solve_knapsack(source), {}
    if source_kind == "setcover":
        return solve_setcover(source), {}
    value = solve_ssat(source)
    return value >= Fraction(1, 2), {"source_value": _fmt(value)}


def _target_answer(kind: str, target) -> tuple[bool, Optional[dict], dict]:
    # imported lazily: the reference solvers above must not depend on these modules
    from .disambiguation import optimal_expected_utility
    from .evaluation import first_step_optimal_set, optimal_policy_value
    from .profiles import optimal_allocation

    if kind == "knapsack-pp":
        alloc = optimal_allocation(target)
        answer = alloc.value >= target.target
        witness = {"allocation": [_fmt(t) for t in alloc.times], "value": _fmt(alloc.value)}
        return answer, witness if answer else None, {"target_value": _fmt(alloc.value)}
    if kind == "knapsack-ae":
        firsts = first_step_optimal_set(target)
        value, policy = optimal_policy_value(target)
        answer = 0 in firsts
        witness = {"first_step_set": sorted(firsts), "value": _fmt(value)}
        return answer, witness if answer else None, {"target_value": _fmt(value)}
    value, policy = optimal_expected_utility(target)
    answer = value >= target.target
    details = {"target_value": _fmt(value), "target_goal": _fmt(target.target)}
    return answer, policy.to_json() if answer else None, details


def verify_reduction(kind: str, source, target=None) -> ReductionReport:
    """Solve ``source`` with its oracle and its reduced image with the real solver.

    ``source`` may be a bare instance or an ``InstanceDocument``. ``target``
    overrides the constructed image (used for fault injection).
    """
    from .reductions import REDUCTIONS

    if kind not in REDUCTIONS:
        raise ValueError(f"unknown reduction {kind!r}; expected one of {sorted(REDUCTIONS)}")
    source_kind, _, transform = REDUCTIONS[kind]
    instance = getattr(source, "instance", source)
    doc_kind = getattr(source, "kind", None)
    expected_type = {"knapsack": KnapsackInstance, "setcover": SetCoverInstance, "ssat": SsatInstance}[source_kind]
    if (doc_kind is not None and doc_kind != source_kind) or not isinstance(instance, expected_type):
        raise TypeError(f"reduction {kind} needs a {source_kind} source")
    source_answer, src_details = _source_answer(source_kind, instance)
    if target is None:
        target = transform(instance)
    target_answer, witness, tgt_details = _target_answer(kind, target)
    return ReductionReport(kind, source_answer, target_answer, witness, {**src_details, **tgt_details})


def corrupt_target(kind: str, source):
    """A deliberately wrong image of ``source`` whose answer disagrees with the source's.

    Exercises the negative path of the equivalence checker.
    """
    from .reductions import REDUCTIONS

    source_kind, _, transform = REDUCTIONS[kind]
    instance = getattr(source, "instance", source)
    target = transform(instance)
    yes, _ = _source_answer(source_kind, instance)
    if kind == "knapsack-pp":
        ceiling = sum((p.values[-1] for p in target.profiles), Fraction(0))
        return type(target)(target.profiles, target.budget, ceiling + 1 if yes else 0)
    if kind == "knapsack-ae":
        if yes:
            return target.with_budget(0)
        trees = (Internal(1, ((Fraction(1), Leaf(1)),)),) + target.trees[1:]
        return ActionEvaluationInstance(trees, target.budget, target.labels)
    mass = sum((target.prior[s] * target.utility[s] for s in target.states), Fraction(0))
    return target.replace(target=mass + 1 if yes else Fraction(0))
