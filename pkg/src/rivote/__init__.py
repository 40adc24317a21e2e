"""rivote: electoral competition with rationally inattentive voters.

A numpy/scipy library for entropy-cost-optimal attention strategies,
symmetric-equilibrium enumeration over finite policy grids, attention sets
and their closed-form thresholds, and Blackwell garbling of finite news
technologies, plus a small CLI experiment runner.
"""

__version__ = "0.1.0"

from .core import (
    CandidateSpec,
    Electorate,
    NumericError,
    PolicyAxis,
    Scenario,
    SymmetryError,
    TabulatedUtility,
    UtilitySpec,
    ValidationError,
    audit_scenario,
    candidate_stage_payoffs,
    derived_kappa,
    differential_utility,
    voter_utility,
)
from .election import (
    EquilibriumRecord,
    MatrixTriple,
    StrategyAssignment,
    aggregate_and_rationalize,
    assignment_for,
    attention_frontier,
    attention_member,
    check_ic,
    downsian_winner,
    enumerate_equilibria,
    median_differential,
    perfect_observation_winner,
    profile_belief,
    truncation_statistic,
    value_matrix,
)
from .extensions import (
    Frontier,
    MultiIssueReduction,
    commitment_value,
    dissemination_filter,
    enumerate_equilibria_commitment,
    multi_issue_reduce,
    quarter_circle_frontier,
    tabulated_frontier,
)
from .news import (
    MarkovKernel,
    NewsTechnology,
    attention_frontier_noisy,
    attention_member_noisy,
    check_log_supermodularity,
    enumerate_equilibria_noisy,
    garble,
    posterior_value,
    signal_belief,
    solve_attention_noisy,
)
from .scenario_io import load_scenario, scenario_from_dict, scenario_hash
from .solver import (
    AttentionSolution,
    BeliefOverProfiles,
    attention_membership,
    attention_threshold_delta,
    entropy,
    gamma,
    gamma_inverse,
    mutual_information,
    solve_attention,
)
