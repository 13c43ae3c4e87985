"""Optimal allocation of deliberation time across piecewise-linear profiles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .model import PerformanceProfilesInstance, PiecewiseLinearProfile, profile_eval, to_fraction

__all__ = [
    "Allocation",
    "ConcavityError",
    "optimal_allocation",
    "decide_pp",
    "concave_allocation",
    "grid_oracle_pp",
]


@dataclass(frozen=True)
class Allocation:
    times: tuple[Fraction, ...]
    value: Fraction

    @property
    def total_time(self) -> Fraction:
        return sum(self.times, Fraction(0))


class ConcavityError(ValueError):
    """A profile passed to :func:`concave_allocation` is not concave."""


def _choices(profile: PiecewiseLinearProfile):
    """Segments an allocation on this profile may end in.

    A single-breakpoint profile is constant; its only "segment" is the point 0.
    """
    segs = profile.segments()
    if not segs:
        t, v = profile.breakpoints[0]
        return [(t, t, v, Fraction(0))]
    return segs


def _fill(choice, budget: Fraction):
    """Best allocation when profile ``i`` is confined to segment ``choice[i]``.

    Returns ``None`` when the segments' left endpoints alone exceed the budget.
    Among optimal fills the lexicographically smallest one is returned: tied
    slopes are filled from the highest profile index down, and zero-slope
    segments stay at their left endpoint.
    """
    residual = budget - sum(start for start, *_ in choice)
    if residual < 0:
        return None
    times = [start for start, *_ in choice]
    value = sum(v0 for _, _, v0, _ in choice)
    order = sorted(
        (i for i, seg in enumerate(choice) if seg[3] > 0),
        key=lambda i: (-choice[i][3], -i),
    )
    for i in order:
        if residual == 0:
            break
        start, end, _, slope = choice[i]
        amount = min(end - start, residual)
        times[i] += amount
        value += slope * amount
        residual -= amount
    return Allocation(tuple(times), value)


def optimal_allocation(instance: PerformanceProfilesInstance) -> Allocation:
    """Exact optimum of ``sum f_i(N_i)`` subject to ``sum N_i <= N``, ``N_i >= 0``.

    Enumerates, per profile, the segment in which its allocation ends. With
    the segments fixed the problem is a fractional knapsack, solved greedily
    by slope. Exponential in the number of profiles. Ties between optimal
    allocations go to the lexicographically smallest time vector.
    """
    if not instance.profiles:
        return Allocation((), Fraction(0))
    best = None
    for choice in itertools.product(*(_choices(p) for p in instance.profiles)):
        alloc = _fill(choice, instance.budget)
        if alloc is None:
            continue
        if best is None or alloc.value > best.value or (
            alloc.value == best.value and alloc.times < best.times
        ):
            best = alloc
    assert best is not None  # all-first-segments choice has zero left endpoints
    return best


def decide_pp(instance: PerformanceProfilesInstance) -> bool:
    return optimal_allocation(instance).value >= instance.target


def concave_allocation(instance: PerformanceProfilesInstance) -> Allocation:
    """Greedy optimum for concave profiles, polynomial in the breakpoint count.

    Budget goes to the steepest remaining segment first; ties go to the
    lowest profile index, then the leftmost segment.
    """
    candidates = []
    for i, profile in enumerate(instance.profiles):
        slopes = profile.slopes()
        for j in range(len(slopes) - 1):
            if slopes[j] < slopes[j + 1]:
                raise ConcavityError(
                    f"profile {i} is not concave: segment {j} slope {slopes[j]} "
                    f"< segment {j + 1} slope {slopes[j + 1]}"
                )
        for j, (start, end, _, slope) in enumerate(profile.segments()):
            if slope > 0:
                candidates.append((-slope, i, j, end - start))
    candidates.sort()
    times = [Fraction(0)] * len(instance.profiles)
    residual = instance.budget
    for _, i, _, length in candidates:
        if residual == 0:
            break
        amount = min(length, residual)
        times[i] += amount
        residual -= amount
    value = sum((profile_eval(p, t) for p, t in zip(instance.profiles, times)), Fraction(0))
    return Allocation(tuple(times), value)


def grid_oracle_pp(instance: PerformanceProfilesInstance, step) -> Fraction:
    """Brute-force maximum over allocations on the lattice ``{0, step, 2*step, ...}``.

    A lower bound on the true optimum; equal to it when the lattice contains
    every breakpoint time and the budget.
    """
    step = to_fraction(step, "step")
    if step <= 0:
        raise ValueError("grid step must be positive")
    units = instance.budget / step
    if units.denominator != 1:
        raise ValueError(f"grid step {step} does not divide budget {instance.budget}")
    units = int(units)
    profiles = instance.profiles
    if not profiles:
        return Fraction(0)
    # table[i][k] = f_i(k * step)
    table = [[profile_eval(p, k * step) for k in range(units + 1)] for p in profiles]

    best = Fraction(0)

    def search(i: int, left: int, acc: Fraction):
        nonlocal best
        if i == len(profiles) - 1:
            # profiles are nondecreasing, so the last one takes everything left
            best = max(best, acc + table[i][left])
            return
        for k in range(left + 1):
            search(i + 1, left - k, acc + table[i][k])

    search(0, units, Fraction(0))
    return best
