from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from metareasoning.model import (
    ActionEvaluationInstance,
    DisambiguationInstance,
    Internal,
    InstanceError,
    KnapsackInstance,
    Leaf,
    Literal,
    PiecewiseLinearProfile,
    Query,
    SetCoverInstance,
    SsatInstance,
    profile_eval,
    to_fraction,
)

from strategies import profiles, small_fractions

RAMP = PiecewiseLinearProfile(((0, 0), (2, 0), (5, 3)))


class TestProfileEval:
    @pytest.mark.parametrize(
        "t, expected",
        [(2, 0), (4, 2), (100, 3), (0, 0), (F(7, 2), F(3, 2)), (5, 3)],
    )
    def test_ramp_values(self, t, expected):
        assert profile_eval(RAMP, t) == expected

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            profile_eval(RAMP, -1)

    def test_float_time_rejected(self):
        with pytest.raises(InstanceError):
            profile_eval(RAMP, 0.5)

    @given(profiles(), small_fractions, small_fractions)
    def test_nondecreasing(self, profile, a, b):
        lo, hi = sorted((a, b))
        assert profile_eval(profile, lo) <= profile_eval(profile, hi)

    @given(profiles())
    def test_exact_at_breakpoints(self, profile):
        for t, v in profile.breakpoints:
            assert profile_eval(profile, t) == v

    @given(profiles(), small_fractions)
    def test_constant_after_last_breakpoint(self, profile, extra):
        t_last, v_last = profile.breakpoints[-1]
        assert profile_eval(profile, t_last + extra) == v_last


class TestProfileInvariants:
    def test_decreasing_values_rejected(self):
        with pytest.raises(InstanceError, match="nondecreasing"):
            PiecewiseLinearProfile(((0, 0), (1, 2), (2, 1)))

    def test_times_strictly_increasing(self):
        with pytest.raises(InstanceError, match="strictly increasing"):
            PiecewiseLinearProfile(((0, 0), (1, 1), (1, 2)))

    def test_must_start_at_zero(self):
        with pytest.raises(InstanceError):
            PiecewiseLinearProfile(((1, 0), (2, 1)))

    def test_concavity(self):
        assert PiecewiseLinearProfile(((0, 0), (1, 2), (3, 3))).is_concave()
        assert not PiecewiseLinearProfile(((0, 0), (1, 1), (2, 3))).is_concave()


class TestRationals:
    @pytest.mark.parametrize("text, num, den", [("7/40", 7, 40), ("14/28", 1, 2), ("3", 3, 1), ("-5/10", -1, 2)])
    def test_parse(self, text, num, den):
        x = to_fraction(text)
        assert (x.numerator, x.denominator) == (num, den)

    @pytest.mark.parametrize("text", ["0.5", "1e3", "1/", "/2", "a/b", "1/0", ""])
    def test_malformed(self, text):
        with pytest.raises(InstanceError):
            to_fraction(text)

    def test_float_refused(self):
        with pytest.raises(InstanceError):
            to_fraction(0.25)


class TestInstances:
    def test_knapsack_requires_positive_integers(self):
        with pytest.raises(InstanceError):
            KnapsackInstance(((0, 1),), 1, 1)
        with pytest.raises(InstanceError):
            KnapsackInstance(((1, 1),), 1, 0)

    def test_setcover_subset_of_universe(self):
        with pytest.raises(InstanceError):
            SetCoverInstance(("1",), (frozenset({"2"}),), 1)

    def test_ssat_literal_range(self):
        with pytest.raises(InstanceError):
            SsatInstance(1, (frozenset({"x2"}),))
        s = SsatInstance(2, (frozenset({"x1", "-y2"}), frozenset()))
        assert Literal("y", 2, True) in s.clauses[0]
        assert s.clauses[1] == frozenset()

    def test_edge_probabilities_sum_to_one(self):
        with pytest.raises(InstanceError):
            Internal(1, ((F(1, 2), Leaf(1)), (F(1, 3), Leaf(0))))
        with pytest.raises(InstanceError):
            Internal(0, ((F(1), Leaf(1)),))

    def test_ae_budget_and_labels(self):
        inst = ActionEvaluationInstance((Leaf(1), Leaf(2)), 3)
        assert inst.labels == ("1", "2")
        with pytest.raises(InstanceError):
            ActionEvaluationInstance((), 3)

    def test_sd_answers_must_cover(self):
        with pytest.raises(InstanceError, match="cover"):
            DisambiguationInstance(
                ("a", "b"), {"a": F(1, 2), "b": F(1, 2)}, {"a": 1, "b": 1},
                (Query((frozenset({"a"}),)),), 1,
            )

    def test_sd_prior_sums_to_one(self):
        with pytest.raises(InstanceError, match="sum"):
            DisambiguationInstance(("a", "b"), {"a": F(1, 2), "b": F(1, 3)}, {"a": 1, "b": 1}, (), 1)

    def test_sd_mappings_read_only(self):
        inst = DisambiguationInstance(("a",), {"a": 1}, {"a": 1}, (), 0)
        with pytest.raises(TypeError):
            inst.prior["a"] = F(0)
        hash(inst)

    def test_query_consistent_counts_keep_duplicates(self):
        q = Query((frozenset({"b"}), frozenset({"b", "c"}), frozenset({"b"})))
        assert q.consistent_count("b") == 3
        assert q.consistent_count("c") == 1
        assert q.consistent_count("z") == 0
