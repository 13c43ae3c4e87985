"""Instance types shared by every solver, oracle and reduction.

All numbers are :class:`fractions.Fraction`; nothing here ever touches a
float.  Every type is a frozen dataclass that validates itself on
construction, so an instance that exists is an instance that is valid.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from numbers import Rational
from typing import Mapping, Union

__all__ = [
    "InstanceError",
    "to_fraction",
    "PiecewiseLinearProfile",
    "profile_eval",
    "KnapsackInstance",
    "SetCoverInstance",
    "Literal",
    "SsatInstance",
    "PerformanceProfilesInstance",
    "Leaf",
    "Internal",
    "EvaluationTree",
    "ActionEvaluationInstance",
    "DisambiguationInstance",
    "Query",
    "INSTANCE_KINDS",
]


_RATIONAL_RE = re.compile(r"[+-]?\d+(/\d+)?")


class InstanceError(ValueError):
    """An instance violates one of its invariants.

    ``field`` names the offending part of the instance so that parse errors
    can point at it.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def to_fraction(value, field: str = "value") -> Fraction:
    """Exact conversion to Fraction; floats are refused."""
    if isinstance(value, bool):
        raise InstanceError(field, f"expected a rational, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        if not _RATIONAL_RE.fullmatch(value.strip()):
            raise InstanceError(field, f"malformed rational literal {value!r}")
        try:
            return Fraction(value.strip())
        except ZeroDivisionError:
            raise InstanceError(field, f"zero denominator in {value!r}") from None
    raise InstanceError(field, f"expected a rational, got {type(value).__name__}")


def _positive_int(value, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceError(field, f"expected a positive integer, got {value!r}")
    if value <= 0:
        raise InstanceError(field, f"expected a positive integer, got {value}")
    return value


# --------------------------------------------------------------------------
# performance profiles


@dataclass(frozen=True)
class PiecewiseLinearProfile:
    """Continuous, nondecreasing piecewise-linear function of deliberation time.

    Linear between consecutive breakpoints and constant after the last one.
    """

    breakpoints: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pts = tuple(
            (to_fraction(t, "breakpoints.time"), to_fraction(v, "breakpoints.value"))
            for t, v in self.breakpoints
        )
        object.__setattr__(self, "breakpoints", pts)
        if not pts:
            raise InstanceError("breakpoints", "at least one breakpoint required")
        if pts[0][0] != 0:
            raise InstanceError("breakpoints", "first breakpoint time must be 0")
        if pts[0][1] < 0:
            raise InstanceError("breakpoints", "values must be nonnegative")
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if t1 <= t0:
                raise InstanceError("breakpoints", "times must be strictly increasing")
            if v1 < v0:
                raise InstanceError("breakpoints", "values must be nondecreasing")

    @classmethod
    def from_points(cls, *points) -> PiecewiseLinearProfile:
        return cls(tuple(points))

    @property
    def times(self) -> tuple[Fraction, ...]:
        return tuple(t for t, _ in self.breakpoints)

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(v for _, v in self.breakpoints)

    def segments(self) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
        """``(start, end, start_value, slope)`` for each finite segment."""
        out = []
        for (t0, v0), (t1, v1) in zip(self.breakpoints, self.breakpoints[1:]):
            out.append((t0, t1, v0, (v1 - v0) / (t1 - t0)))
        return out

    def slopes(self) -> list[Fraction]:
        return [s for *_, s in self.segments()]

    def is_concave(self) -> bool:
        slopes = self.slopes()
        return all(a >= b for a, b in zip(slopes, slopes[1:]))

    def __call__(self, t) -> Fraction:
        return profile_eval(self, t)


def profile_eval(profile: PiecewiseLinearProfile, t) -> Fraction:
    """Value of ``profile`` after ``t`` units of deliberation."""
    t = to_fraction(t, "t")
    if t < 0:
        raise ValueError(f"profile evaluated at negative time {t}")
    pts = profile.breakpoints
    if t >= pts[-1][0]:
        return pts[-1][1]
    for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
        if t0 <= t < t1:
            if t == t0:
                return v0
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    raise AssertionError("unreachable")  # pragma: no cover


@dataclass(frozen=True)
class PerformanceProfilesInstance:
    profiles: tuple[PiecewiseLinearProfile, ...]
    budget: Fraction
    target: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "profiles", tuple(self.profiles))
        for p in self.profiles:
            if not isinstance(p, PiecewiseLinearProfile):
                raise InstanceError("profiles", "expected PiecewiseLinearProfile entries")
        budget = to_fraction(self.budget, "budget")
        target = to_fraction(self.target, "target")
        if budget < 0:
            raise InstanceError("budget", "must be nonnegative")
        if target < 0:
            raise InstanceError("target", "must be nonnegative")
        object.__setattr__(self, "budget", budget)
        object.__setattr__(self, "target", target)

    def with_budget(self, budget) -> PerformanceProfilesInstance:
        return PerformanceProfilesInstance(self.profiles, budget, self.target)


# --------------------------------------------------------------------------
# source problems


@dataclass(frozen=True)
class KnapsackInstance:
    """Items ``(cost, value)``, a capacity and a value target, all positive integers."""

    items: tuple[tuple[int, int], ...]
    capacity: int
    target: int

    def __post_init__(self):
        items = tuple(tuple(item) for item in self.items)
        for i, item in enumerate(items):
            if len(item) != 2:
                raise InstanceError(f"items[{i}]", "expected a (cost, value) pair")
            _positive_int(item[0], f"items[{i}].cost")
            _positive_int(item[1], f"items[{i}].value")
        object.__setattr__(self, "items", items)
        _positive_int(self.capacity, "capacity")
        _positive_int(self.target, "target")

    @property
    def costs(self) -> list[int]:
        return [c for c, _ in self.items]

    @property
    def values(self) -> list[int]:
        return [v for _, v in self.items]


@dataclass(frozen=True)
class SetCoverInstance:
    universe: tuple[str, ...]
    subsets: tuple[frozenset[str], ...]
    bound: int

    def __post_init__(self):
        universe = tuple(str(s) for s in self.universe)
        if len(set(universe)) != len(universe):
            raise InstanceError("universe", "duplicate labels")
        subsets = tuple(frozenset(str(s) for s in t) for t in self.subsets)
        members = set(universe)
        for i, t in enumerate(subsets):
            if not t <= members:
                raise InstanceError(f"subsets[{i}]", f"{sorted(t - members)} not in universe")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "subsets", subsets)
        _positive_int(self.bound, "bound")


@dataclass(frozen=True, order=True)
class Literal:
    """``x_i``/``y_i`` or their negations; ``index`` is 1-based."""

    var: str
    index: int
    negated: bool = False

    def __post_init__(self):
        if self.var not in ("x", "y"):
            raise InstanceError("literal", f"variable must be x or y, got {self.var!r}")

    @classmethod
    def parse(cls, text: str) -> Literal:
        text = text.strip()
        negated = text[:1] in ("-", "~", "¬")
        body = text[1:] if negated else text
        if len(body) < 2 or body[0] not in "xy" or not body[1:].isdigit():
            raise InstanceError("clauses", f"malformed literal {text!r}")
        return cls(body[0], int(body[1:]), negated)

    def negate(self) -> Literal:
        return Literal(self.var, self.index, not self.negated)

    def __str__(self):
        return f"{'-' if self.negated else ''}{self.var}{self.index}"


@dataclass(frozen=True)
class SsatInstance:
    """CNF over ``x_1..x_n, y_1..y_n``; x chosen by us, y uniformly by nature."""

    n: int
    clauses: tuple[frozenset[Literal], ...]

    def __post_init__(self):
        _positive_int(self.n, "n")
        clauses = []
        for i, clause in enumerate(self.clauses):
            lits = frozenset(Literal.parse(l) if isinstance(l, str) else l for l in clause)
            for lit in lits:
                if not 1 <= lit.index <= self.n:
                    raise InstanceError(f"clauses[{i}]", f"literal {lit} out of range 1..{self.n}")
            clauses.append(lits)
        object.__setattr__(self, "clauses", tuple(clauses))


# --------------------------------------------------------------------------
# action evaluation trees


@dataclass(frozen=True)
class Leaf:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", to_fraction(self.value, "value"))

    @property
    def is_leaf(self) -> bool:
        return True


@dataclass(frozen=True)
class Internal:
    """Node where one more evaluation step costs ``cost``.

    ``children`` is a sequence of ``(probability, node)`` pairs whose
    probabilities sum to exactly one.
    """

    cost: Fraction
    children: tuple[tuple[Fraction, EvaluationTree], ...]

    def __post_init__(self):
        cost = to_fraction(self.cost, "cost")
        if cost <= 0:
            raise InstanceError("cost", "internal node cost must be positive")
        children = tuple((to_fraction(p, "probability"), c) for p, c in self.children)
        if not children:
            raise InstanceError("children", "internal node needs at least one child")
        for p, c in children:
            if not 0 < p <= 1:
                raise InstanceError("probability", f"edge probability {p} not in (0, 1]")
            if not isinstance(c, (Leaf, Internal)):
                raise InstanceError("children", "child must be a Leaf or Internal node")
        if sum(p for p, _ in children) != 1:
            raise InstanceError("probability", "edge probabilities must sum to 1")
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "children", children)

    @property
    def is_leaf(self) -> bool:
        return False


EvaluationTree = Union[Leaf, Internal]


def binary_tree(p_first, first, second, cost) -> Internal:
    """Depth-1 tree ``(p1, 1 - p1, u1, u2, k)`` in the notation of the gadgets."""
    p_first = to_fraction(p_first)
    return Internal(cost, ((p_first, Leaf(first)), (1 - p_first, Leaf(second))))


@dataclass(frozen=True)
class ActionEvaluationInstance:
    trees: tuple[EvaluationTree, ...]
    budget: Fraction
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        trees = tuple(self.trees)
        if not trees:
            raise InstanceError("trees", "at least one tree required")
        for t in trees:
            if not isinstance(t, (Leaf, Internal)):
                raise InstanceError("trees", "expected Leaf or Internal roots")
        labels = tuple(str(l) for l in self.labels) or tuple(str(i + 1) for i in range(len(trees)))
        if len(labels) != len(trees):
            raise InstanceError("labels", "one label per tree required")
        budget = to_fraction(self.budget, "budget")
        if budget < 0:
            raise InstanceError("budget", "must be nonnegative")
        object.__setattr__(self, "trees", trees)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "budget", budget)

    def with_budget(self, budget) -> ActionEvaluationInstance:
        return ActionEvaluationInstance(self.trees, budget, self.labels)


# --------------------------------------------------------------------------
# state disambiguation


@dataclass(frozen=True)
class Query:
    """A query: the list of answers, each the set of states consistent with it.

    Duplicate answers are kept; they count separately toward the answer
    distribution.
    """

    answers: tuple[frozenset[str], ...]
    label: str = ""

    def __post_init__(self):
        answers = tuple(frozenset(str(s) for s in a) for a in self.answers)
        if not answers:
            raise InstanceError("queries", "a query needs at least one answer")
        object.__setattr__(self, "answers", answers)

    def consistent_count(self, state: str) -> int:
        return self.counts.get(state, 0)

    @cached_property
    def counts(self) -> dict[str, int]:
        """Number of answers consistent with each state."""
        out: dict[str, int] = {}
        for a in self.answers:
            for s in a:
                out[s] = out.get(s, 0) + 1
        return out


@dataclass(frozen=True)
class DisambiguationInstance:
    states: tuple[str, ...]
    prior: Mapping[str, Fraction]
    utility: Mapping[str, Fraction]
    queries: tuple[Query, ...]
    budget: int
    target: Fraction = Fraction(0)

    def __post_init__(self):
        states = tuple(str(s) for s in self.states)
        if not states:
            raise InstanceError("states", "at least one state required")
        if len(set(states)) != len(states):
            raise InstanceError("states", "duplicate state labels")
        members = set(states)
        for name, mapping in (("prior", self.prior), ("utility", self.utility)):
            if set(map(str, mapping)) != members:
                raise InstanceError(name, "must assign exactly one value to every state")
        prior = {str(s): to_fraction(v, f"prior[{s}]") for s, v in self.prior.items()}
        utility = {str(s): to_fraction(v, f"utility[{s}]") for s, v in self.utility.items()}
        if any(v < 0 for v in prior.values()):
            raise InstanceError("prior", "probabilities must be nonnegative")
        if sum(prior.values()) != 1:
            raise InstanceError("prior", "probabilities must sum to exactly 1")
        if any(v < 0 for v in utility.values()):
            raise InstanceError("utility", "utilities must be nonnegative")
        queries = []
        for i, q in enumerate(self.queries):
            if not isinstance(q, Query):
                q = Query(tuple(q))
            if not q.label:
                q = Query(q.answers, f"q{i + 1}")
            covered = frozenset().union(*q.answers)
            if not covered <= members:
                raise InstanceError(f"queries[{i}]", f"unknown states {sorted(covered - members)}")
            if covered != members:
                raise InstanceError(f"queries[{i}]", "answers must cover every state")
            queries.append(q)
        if isinstance(self.budget, bool) or not isinstance(self.budget, int) or self.budget < 0:
            raise InstanceError("budget", "must be a nonnegative integer")
        target = to_fraction(self.target, "target")
        if target < 0:
            raise InstanceError("target", "must be nonnegative")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "prior", _FrozenMap(prior))
        object.__setattr__(self, "utility", _FrozenMap(utility))
        object.__setattr__(self, "queries", tuple(queries))
        object.__setattr__(self, "target", target)

    def replace(self, **changes) -> DisambiguationInstance:
        fields = dict(
            states=self.states,
            prior=self.prior,
            utility=self.utility,
            queries=self.queries,
            budget=self.budget,
            target=self.target,
        )
        fields.update(changes)
        return DisambiguationInstance(**fields)


class _FrozenMap(dict):
    """Hashable, read-only dict so that instances stay hashable."""

    def __hash__(self):
        return hash(tuple(sorted(self.items())))

    def _readonly(self, *args, **kwargs):
        raise TypeError("instance mappings are read-only")

    __setitem__ = __delitem__ = clear = pop = popitem = setdefault = update = _readonly


INSTANCE_KINDS = {
    "knapsack": KnapsackInstance,
    "setcover": SetCoverInstance,
    "ssat": SsatInstance,
    "performance-profiles": PerformanceProfilesInstance,
    "action-evaluation": ActionEvaluationInstance,
    "state-disambiguation": DisambiguationInstance,
}
