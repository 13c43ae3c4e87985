"""Budgeted evaluation control over action evaluation trees.

The solver state is the tuple of current nodes (one per tree) plus the
remaining budget. Each step either stops, collecting the best current
node value, or pays a tree's node cost and moves that tree to a random
child. Trees evolve independently, so a state's value only depends on that
tuple and the budget, which is what the memo table is keyed on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .model import ActionEvaluationInstance, EvaluationTree, Internal, Leaf

__all__ = [
    "node_value",
    "propagate_values",
    "AePolicy",
    "optimal_policy_value",
    "first_step_values",
    "first_step_optimal_set",
    "decide_first_action",
]


def node_value(node: EvaluationTree) -> Fraction:
    """Expected value of an action whose evaluation has reached ``node``."""
    if isinstance(node, Leaf):
        return node.value
    return sum((p * node_value(child) for p, child in node.children), Fraction(0))


def propagate_values(tree: EvaluationTree) -> dict[tuple[int, ...], Fraction]:
    """Value of every node, keyed by its path of child indices from the root.

    The root is ``()``; the second child of the root is ``(1,)``.
    """
    values: dict[tuple[int, ...], Fraction] = {}

    def walk(node, path):
        if isinstance(node, Leaf):
            values[path] = node.value
        else:
            values[path] = sum(
                (p * walk(child, path + (i,)) for i, (p, child) in enumerate(node.children)),
                Fraction(0),
            )
        return values[path]

    walk(tree, ())
    return values


@dataclass
class AePolicy:
    """Contingency plan. ``action`` is a tree index or ``None`` for stop.

    ``outcomes`` holds one ``(probability, subpolicy)`` per child of the
    evaluated node, in child order.
    """

    value: Fraction
    action: Optional[int] = None
    outcomes: list[tuple[Fraction, "AePolicy"]] = field(default_factory=list)

    def first_action(self) -> Optional[int]:
        return self.action

    def describe(self, labels=None, indent: int = 0) -> list[str]:
        pad = "  " * indent
        if self.action is None:
            return [f"{pad}stop (value {self.value})"]
        name = labels[self.action] if labels else str(self.action)
        lines = [f"{pad}evaluate {name} (value {self.value})"]
        for i, (p, sub) in enumerate(self.outcomes):
            lines.append(f"{pad}  outcome {i} [p={p}]:")
            lines.extend(sub.describe(labels, indent + 2))
        return lines


class _Solver:
    def __init__(self, trees):
        self.trees = tuple(trees)
        self.memo: dict[tuple, Fraction] = {}
        self.value_cache: dict[int, Fraction] = {}

    def stop_value(self, nodes) -> Fraction:
        return max(self.nv(n) for n in nodes)

    def nv(self, node) -> Fraction:
        key = id(node)
        if key not in self.value_cache:
            self.value_cache[key] = node_value(node)
        return self.value_cache[key]

    def step_value(self, nodes, budget, i) -> Fraction:
        node = nodes[i]
        total = Fraction(0)
        for p, child in node.children:
            total += p * self.value(nodes[:i] + (child,) + nodes[i + 1:], budget - node.cost)
        return total

    def affordable(self, nodes, budget):
        return [i for i, n in enumerate(nodes) if isinstance(n, Internal) and n.cost <= budget]

    def value(self, nodes, budget) -> Fraction:
        key = (tuple(map(id, nodes)), budget)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        best = self.stop_value(nodes)
        for i in self.affordable(nodes, budget):
            best = max(best, self.step_value(nodes, budget, i))
        self.memo[key] = best
        return best

    def policy(self, nodes, budget) -> AePolicy:
        best = self.value(nodes, budget)
        # prefer stop, then the lowest tree index
        if self.stop_value(nodes) == best:
            return AePolicy(best)
        for i in self.affordable(nodes, budget):
            if self.step_value(nodes, budget, i) == best:
                node = nodes[i]
                rest = budget - node.cost
                outcomes = [
                    (p, self.policy(nodes[:i] + (child,) + nodes[i + 1:], rest))
                    for p, child in node.children
                ]
                return AePolicy(best, i, outcomes)
        raise AssertionError("no action attains the optimum")  # pragma: no cover


def optimal_policy_value(instance: ActionEvaluationInstance) -> tuple[Fraction, AePolicy]:
    """Maximal expected final utility over policies spending at most the budget."""
    solver = _Solver(instance.trees)
    value = solver.value(instance.trees, instance.budget)
    return value, solver.policy(instance.trees, instance.budget)


def first_step_values(instance: ActionEvaluationInstance) -> dict[int, Fraction]:
    """Best achievable value for each tree that can be evaluated first."""
    solver = _Solver(instance.trees)
    nodes, budget = instance.trees, instance.budget
    return {i: solver.step_value(nodes, budget, i) for i in solver.affordable(nodes, budget)}


def first_step_optimal_set(instance: ActionEvaluationInstance) -> frozenset[int]:
    """Indices (0-based) of trees whose evaluation can open an optimal policy."""
    solver = _Solver(instance.trees)
    nodes, budget = instance.trees, instance.budget
    best = solver.value(nodes, budget)
    return frozenset(
        i for i in solver.affordable(nodes, budget) if solver.step_value(nodes, budget, i) == best
    )


def decide_first_action(instance: ActionEvaluationInstance, index: int) -> bool:
    """Is there an optimal policy whose first step evaluates tree ``index`` (0-based)?"""
    if not 0 <= index < len(instance.trees):
        raise IndexError(f"tree index {index} out of range for {len(instance.trees)} trees")
    return index in first_step_optimal_set(instance)
