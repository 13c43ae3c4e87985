"""Exact solvers, hardness-reduction gadgets and brute-force oracles for
three basic metareasoning problems: allocating deliberation time across
performance profiles, budgeted evaluation of competing actions, and
disambiguating the state of the world with limited queries.
"""

from .disambiguation import (
    KnowledgeState,
    SdPolicy,
    answer_distribution,
    decide_sd,
    optimal_expected_utility,
    refine,
    terminal_utility,
    to_constant_utility,
    to_uniform_prior,
)
from .evaluation import (
    AePolicy,
    decide_first_action,
    first_step_optimal_set,
    optimal_policy_value,
    propagate_values,
)
from .fileformat import InstanceDocument, ParseError, parse_instance, serialize_instance
from .model import (
    ActionEvaluationInstance,
    DisambiguationInstance,
    Internal,
    InstanceError,
    KnapsackInstance,
    Leaf,
    Literal,
    PerformanceProfilesInstance,
    PiecewiseLinearProfile,
    Query,
    SetCoverInstance,
    SsatInstance,
    profile_eval,
)
from .oracles import ReductionReport, solve_knapsack, solve_setcover, solve_ssat, verify_reduction
from .profiles import Allocation, concave_allocation, decide_pp, grid_oracle_pp, optimal_allocation
from .reductions import knapsack_to_ae, knapsack_to_pp, setcover_to_sd, ssat_to_sd

__version__ = "0.1.0"
