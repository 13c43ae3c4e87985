"""State disambiguation by budgeted queries.

A knowledge state stores, for every world state, the joint probability
that the world is in that state *and* the answers seen so far occurred,
together with the set of states still consistent with those answers.
Nothing is ever renormalized: the value of a leaf of the policy tree is the
weight of the single surviving state times its utility, and the policy's
expected utility is the plain sum over its leaves.

Consistency is tracked separately from weight on purpose. A state with
prior 0 still has to be ruled out by some answer before another state
counts as identified; otherwise moving utility mass between prior and
utility (see :func:`to_constant_utility`) would change the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .model import DisambiguationInstance

__all__ = [
    "DegenerateInstanceError",
    "KnowledgeState",
    "SdPolicy",
    "answer_distribution",
    "initial_knowledge",
    "refine",
    "terminal_utility",
    "optimal_expected_utility",
    "decide_sd",
    "to_uniform_prior",
    "to_constant_utility",
]


class DegenerateInstanceError(ValueError):
    """A normalization is undefined for this instance."""


@dataclass(frozen=True)
class KnowledgeState:
    """Joint weights plus the states not yet ruled out by any answer."""

    weights: tuple[tuple[str, Fraction], ...]
    consistent: frozenset[str]

    @classmethod
    def from_mapping(cls, weights: Mapping[str, Fraction], order, consistent=None) -> KnowledgeState:
        order = tuple(order)
        alive = frozenset(order if consistent is None else consistent)
        return cls(tuple((s, Fraction(weights.get(s, 0))) for s in order), alive)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.weights)

    def support(self) -> frozenset[str]:
        return self.consistent

    @property
    def mass(self) -> Fraction:
        return sum((w for _, w in self.weights), Fraction(0))


@dataclass
class SdPolicy:
    """Query tree. ``query`` is a 0-based query index, or ``None`` to stop.

    ``branches`` maps answer index to subpolicy; answers with zero
    probability on the current branch are left out.
    """

    value: Fraction
    query: Optional[int] = None
    branches: dict[int, "SdPolicy"] = field(default_factory=dict)

    def depth(self) -> int:
        if self.query is None:
            return 0
        return 1 + max((b.depth() for b in self.branches.values()), default=0)

    def describe(self, instance: DisambiguationInstance, indent: int = 0) -> list[str]:
        pad = "  " * indent
        if self.query is None:
            return [f"{pad}stop (value {self.value})"]
        q = instance.queries[self.query]
        lines = [f"{pad}ask {q.label} (value {self.value})"]
        for a, sub in sorted(self.branches.items()):
            states = ",".join(s for s in instance.states if s in q.answers[a])
            lines.append(f"{pad}  answer {a} {{{states}}}:")
            lines.extend(sub.describe(instance, indent + 2))
        return lines

    def to_json(self) -> dict:
        if self.query is None:
            return {"stop": True, "value": _fmt(self.value)}
        return {
            "query": self.query,
            "value": _fmt(self.value),
            "branches": {str(a): sub.to_json() for a, sub in sorted(self.branches.items())},
        }


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def answer_distribution(instance: DisambiguationInstance, query: int, state: str) -> dict[int, Fraction]:
    """Nature's answer distribution for ``query`` when the world is in ``state``."""
    if state not in instance.prior:
        raise KeyError(f"unknown state {state!r}")
    answers = instance.queries[query].answers
    consistent = [j for j, a in enumerate(answers) if state in a]
    share = Fraction(1, len(consistent))
    return {j: share if j in consistent else Fraction(0) for j in range(len(answers))}


def initial_knowledge(instance: DisambiguationInstance) -> KnowledgeState:
    return KnowledgeState.from_mapping(instance.prior, instance.states)


def refine(instance: DisambiguationInstance, k: KnowledgeState, query: int, answer: int) -> KnowledgeState:
    """Condition (without renormalizing) on ``answer`` to ``query``."""
    q = instance.queries[query]
    chosen = q.answers[answer]
    alive = k.consistent & chosen
    out = []
    counts = q.counts
    for s, w in k.weights:
        if w and s in alive:
            out.append((s, w / counts[s]))
        else:
            out.append((s, Fraction(0)))
    return KnowledgeState(tuple(out), alive)


def terminal_utility(instance: DisambiguationInstance, k: KnowledgeState) -> Fraction:
    support = k.support()
    if len(support) != 1:
        return Fraction(0)
    (s,) = support
    return k.as_dict()[s] * instance.utility[s]


class _Solver:
    def __init__(self, instance: DisambiguationInstance, allow_repeats: bool):
        self.instance = instance
        self.allow_repeats = allow_repeats
        self.memo: dict[tuple, Fraction] = {}

    def options(self, used: frozenset[int]):
        return [q for q in range(len(self.instance.queries)) if self.allow_repeats or q not in used]

    def children(self, k: KnowledgeState, q: int):
        # branches carrying no weight add nothing to the value
        live = frozenset(s for s, w in k.weights if w) & k.consistent
        for a, answer in enumerate(self.instance.queries[q].answers):
            if live & answer:
                yield a, refine(self.instance, k, q, a)

    def query_value(self, k, n, used, q) -> Fraction:
        used = used if self.allow_repeats else used | {q}
        return sum((self.value(child, n - 1, used) for _, child in self.children(k, q)), Fraction(0))

    def value(self, k: KnowledgeState, n: int, used: frozenset[int]) -> Fraction:
        key = (k.weights, k.consistent, n, used if not self.allow_repeats else None)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        best = terminal_utility(self.instance, k)
        # once at most one state survives, further queries cannot change the value
        if n > 0 and len(k.support()) > 1:
            for q in self.options(used):
                best = max(best, self.query_value(k, n, used, q))
        self.memo[key] = best
        return best

    def policy(self, k: KnowledgeState, n: int, used: frozenset[int]) -> SdPolicy:
        best = self.value(k, n, used)
        if n == 0 or len(k.support()) <= 1:
            return SdPolicy(best)
        # lowest query index among optimal ones; stop only if no query attains it
        for q in self.options(used):
            if self.query_value(k, n, used, q) == best:
                nxt = used if self.allow_repeats else used | {q}
                branches = {a: self.policy(child, n - 1, nxt) for a, child in self.children(k, q)}
                return SdPolicy(best, q, branches)
        return SdPolicy(best)


def optimal_expected_utility(
    instance: DisambiguationInstance, allow_repeats: bool = False
) -> tuple[Fraction, SdPolicy]:
    """Optimal expected utility over policies asking at most ``budget`` queries.

    By default a query is asked at most once along any branch. With
    ``allow_repeats=True`` a query may be re-asked and nature redraws its
    answer independently, which can pay off when a state is consistent with
    several answers of the same query.
    """
    solver = _Solver(instance, allow_repeats)
    k0 = initial_knowledge(instance)
    value = solver.value(k0, instance.budget, frozenset())
    return value, solver.policy(k0, instance.budget, frozenset())


def decide_sd(instance: DisambiguationInstance, allow_repeats: bool = False) -> bool:
    return optimal_expected_utility(instance, allow_repeats)[0] >= instance.target


def _weighted_mass(instance: DisambiguationInstance) -> Fraction:
    return sum((instance.prior[s] * instance.utility[s] for s in instance.states), Fraction(0))


def to_uniform_prior(instance: DisambiguationInstance) -> DisambiguationInstance:
    """Equivalent instance with a uniform prior; each state keeps its prior-utility product."""
    r = len(instance.states)
    return instance.replace(
        prior={s: Fraction(1, r) for s in instance.states},
        utility={s: r * instance.prior[s] * instance.utility[s] for s in instance.states},
    )


def to_constant_utility(instance: DisambiguationInstance) -> DisambiguationInstance:
    """Equivalent instance with utility 1 everywhere; target rescaled accordingly."""
    total = _weighted_mass(instance)
    if total == 0:
        raise DegenerateInstanceError("every state has zero prior-utility product")
    return instance.replace(
        prior={s: instance.prior[s] * instance.utility[s] / total for s in instance.states},
        utility={s: Fraction(1) for s in instance.states},
        target=instance.target / total,
    )
