"""Seeded random instance generators.

Reproducibility contract: each generator draws from
``random.Random(seed)`` (CPython's Mersenne Twister seeded with a 64-bit
unsigned integer) and only ever calls ``randint``, whose output for a given
seed is the same on every platform. Corpus member ``i`` of seed ``s`` uses
:func:`child_seed` ``(s, i)``: the first 8 bytes of ``sha256(f"{s}:{i}")``
read big-endian, which keeps corpora splittable.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction

from .model import (
    ActionEvaluationInstance,
    DisambiguationInstance,
    Internal,
    KnapsackInstance,
    Leaf,
    Literal,
    PerformanceProfilesInstance,
    PiecewiseLinearProfile,
    Query,
    SetCoverInstance,
    SsatInstance,
)

__all__ = [
    "GeneratorConfig",
    "child_seed",
    "generate",
    "random_knapsack",
    "random_setcover",
    "random_ssat",
    "random_profiles",
    "random_ae",
    "random_sd",
]

MAX_SEED = 2**64 - 1


def child_seed(seed: int, index: int) -> int:
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _rng(seed: int) -> random.Random:
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return random.Random(seed)


def _check(name: str, value: int, low: int, high: int | None = None):
    if value < low or (high is not None and value > high):
        bound = f"[{low}, {high}]" if high is not None else f">= {low}"
        raise ValueError(f"{name} must be in {bound}, got {value}")


def random_knapsack(seed: int, items: int = 3, max_cost: int = 6, max_value: int = 6) -> KnapsackInstance:
    _check("items", items, 0)
    _check("max_cost", max_cost, 1)
    _check("max_value", max_value, 1)
    rng = _rng(seed)
    pairs = tuple((rng.randint(1, max_cost), rng.randint(1, max_value)) for _ in range(items))
    capacity = rng.randint(1, max(1, sum(c for c, _ in pairs)))
    target = rng.randint(1, max(1, sum(v for _, v in pairs)))
    return KnapsackInstance(pairs, capacity, target)


def random_setcover(seed: int, universe: int = 4, subsets: int = 5) -> SetCoverInstance:
    _check("universe", universe, 0)
    _check("subsets", subsets, 0)
    rng = _rng(seed)
    labels = tuple(str(i + 1) for i in range(universe))
    family = tuple(frozenset(s for s in labels if rng.randint(0, 1)) for _ in range(subsets))
    bound = rng.randint(1, max(1, subsets))
    return SetCoverInstance(labels, family, bound)


def random_ssat(seed: int, n: int = 2, clauses: int = 3, max_width: int = 2) -> SsatInstance:
    _check("n", n, 1)
    _check("clauses", clauses, 0)
    _check("max_width", max_width, 1)
    rng = _rng(seed)
    pool = [Literal(v, i, neg) for i in range(1, n + 1) for v in "xy" for neg in (False, True)]
    out = []
    for _ in range(clauses):
        width = rng.randint(1, max_width)
        lits = set()
        for _ in range(width):
            lits.add(pool[rng.randint(0, len(pool) - 1)])
        out.append(frozenset(lits))
    return SsatInstance(n, tuple(out))


def random_profiles(
    seed: int,
    profiles: int = 3,
    breakpoints: int = 3,
    max_step: int = 3,
    max_rise: int = 4,
    budget: int | None = None,
    concave: bool = False,
    integral: bool = True,
) -> PerformanceProfilesInstance:
    """Profiles anchored at (0, 0). Non-integral mode places breakpoints on a 1/2 grid."""
    _check("profiles", profiles, 0)
    _check("breakpoints", breakpoints, 1)
    _check("max_step", max_step, 1)
    _check("max_rise", max_rise, 0)
    rng = _rng(seed)
    unit = Fraction(1) if integral else Fraction(1, 2)
    out = []
    for _ in range(profiles):
        if concave:
            # draw slopes then sort descending
            widths = [rng.randint(1, max_step) * unit for _ in range(breakpoints - 1)]
            slopes = sorted((Fraction(rng.randint(0, max_rise), rng.randint(1, 2)) for _ in widths), reverse=True)
            pts = [(Fraction(0), Fraction(0))]
            for w, s in zip(widths, slopes):
                t, v = pts[-1]
                pts.append((t + w, v + s * w))
        else:
            pts = [(Fraction(0), Fraction(0))]
            for _ in range(breakpoints - 1):
                t, v = pts[-1]
                pts.append((t + rng.randint(1, max_step) * unit, v + rng.randint(0, max_rise) * unit))
        out.append(PiecewiseLinearProfile(tuple(pts)))
    if budget is None:
        budget = rng.randint(0, max_step * (breakpoints - 1) * max(1, profiles) // 2 + 1)
    return PerformanceProfilesInstance(tuple(out), budget, Fraction(0))


def _random_tree(rng: random.Random, depth: int, branching: int, max_cost: int, max_value: int):
    if depth == 0 or rng.randint(0, 3) == 0:
        return Leaf(rng.randint(-max_value, max_value))
    k = rng.randint(1, branching) if branching > 1 else 1
    weights = [rng.randint(1, 4) for _ in range(k)]
    total = sum(weights)
    children = tuple(
        (Fraction(w, total), _random_tree(rng, depth - 1, branching, max_cost, max_value)) for w in weights
    )
    return Internal(rng.randint(1, max_cost), children)


def random_ae(
    seed: int,
    trees: int = 3,
    depth: int = 2,
    branching: int = 2,
    max_cost: int = 3,
    max_value: int = 5,
    budget: int = 4,
) -> ActionEvaluationInstance:
    _check("trees", trees, 1)
    _check("depth", depth, 0)
    _check("branching", branching, 1)
    _check("max_cost", max_cost, 1)
    _check("budget", budget, 0)
    rng = _rng(seed)
    roots = tuple(_random_tree(rng, depth, branching, max_cost, max_value) for _ in range(trees))
    return ActionEvaluationInstance(roots, budget)


def random_sd(
    seed: int,
    states: int = 3,
    queries: int = 3,
    max_answers: int = 3,
    budget: int = 2,
    max_utility: int = 4,
) -> DisambiguationInstance:
    """Random prior and utilities; each query's answers are random subsets patched to cover every state."""
    _check("states", states, 1)
    _check("queries", queries, 0)
    _check("max_answers", max_answers, 1)
    _check("budget", budget, 0)
    rng = _rng(seed)
    labels = tuple(f"s{i + 1}" for i in range(states))
    weights = [rng.randint(1, 4) for _ in labels]
    prior = {s: Fraction(w, sum(weights)) for s, w in zip(labels, weights)}
    utility = {s: Fraction(rng.randint(0, max_utility)) for s in labels}
    qs = []
    for qi in range(queries):
        k = rng.randint(1, max_answers)
        answers = [set(s for s in labels if rng.randint(0, 1)) for _ in range(k)]
        for s in labels:
            if not any(s in a for a in answers):
                answers[rng.randint(0, k - 1)].add(s)
        qs.append(Query(tuple(frozenset(a) for a in answers), f"q{qi + 1}"))
    target = Fraction(rng.randint(0, 8), 8) * max(utility.values(), default=0)
    return DisambiguationInstance(labels, prior, utility, tuple(qs), budget, target)


_GENERATORS = {
    "knapsack": random_knapsack,
    "setcover": random_setcover,
    "ssat": random_ssat,
    "performance-profiles": random_profiles,
    "action-evaluation": random_ae,
    "state-disambiguation": random_sd,
}


@dataclass(frozen=True)
class GeneratorConfig:
    """Kind, seed and keyword size parameters for one generator."""

    kind: str
    seed: int = 0
    params: tuple[tuple[str, object], ...] = ()

    def __post_init__(self):
        if self.kind not in _GENERATORS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def generate(config: GeneratorConfig):
    return _GENERATORS[config.kind](config.seed, **dict(config.params))
