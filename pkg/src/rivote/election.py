"""Symmetric electoral competition over finite grids.

Vote aggregation from optimal attention strategies, candidate incentive
checks, exhaustive enumeration of pure symmetric equilibria, attention-set
membership and boundary scans, and the truncation statistic that drives the
comparative statics in the attention cost.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    EXACT,
    TOL,
    NumericError,
    Scenario,
    UtilitySpec,
    ValidationError,
    loser_value,
    require_symmetric,
    voter_utility,
    winner_value,
)
from .solver import (
    AttentionSolution,
    BeliefOverProfiles,
    attention_membership,
    log_mean_exp,
    solve_attention,
)


# ---------------------------------------------------------------------------
# Matrix representation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MatrixTriple:
    """Policy levels a_1 < ... < a_N plus the probability and winning matrices.

    Cell (i, j) stands for the profile (-a_i, a_j); ``w[i, j]`` is candidate
    beta's winning probability there, one of {0, 1/2, 1}.
    """

    a_values: tuple[float, ...]
    sigma: np.ndarray
    w: np.ndarray

    def __post_init__(self) -> None:
        a_values = tuple(float(a) for a in self.a_values)
        sigma = np.array(self.sigma, dtype=float)
        w = np.array(self.w, dtype=float)
        sigma.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "a_values", a_values)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "w", w)
        n = len(a_values)
        if a_values[0] <= 0 or any(hi <= lo for lo, hi in zip(a_values, a_values[1:])):
            raise ValidationError("policy levels must be positive and strictly increasing")
        if sigma.shape != (n, n) or w.shape != (n, n):
            raise ValidationError("sigma and w must be square of the same order")
        if np.any(sigma <= 0):
            raise ValidationError("profile probabilities must be positive")
        if np.max(np.abs(sigma - sigma.T)) > EXACT:
            raise ValidationError("probability matrix must be symmetric")
        if abs(float(sigma.sum()) - 1.0) > EXACT:
            raise ValidationError("profile probabilities must sum to 1")
        if not np.all(np.isin(w, (0.0, 0.5, 1.0))):
            raise ValidationError("winning probabilities must be 0, 1/2 or 1")

    @property
    def order(self) -> int:
        return len(self.a_values)


@dataclass(frozen=True)
class StrategyAssignment:
    """Pure symmetric candidate strategy: beta's type -> policy map.

    Candidate alpha plays the mirror image (type -t proposes the negation of
    beta's policy for t).
    """

    types: tuple[float, ...]
    type_probs: tuple[float, ...]
    policies: tuple[float, ...]

    def __post_init__(self) -> None:
        types = tuple(float(t) for t in self.types)
        probs = tuple(float(p) for p in self.type_probs)
        policies = tuple(float(a) for a in self.policies)
        object.__setattr__(self, "types", types)
        object.__setattr__(self, "type_probs", probs)
        object.__setattr__(self, "policies", policies)
        if not (len(types) == len(probs) == len(policies)):
            raise ValidationError("types, probabilities and policies must align")
        if any(hi <= lo for lo, hi in zip(types, types[1:])):
            raise ValidationError("types must be strictly increasing")
        if any(p <= 0 for p in probs) or abs(sum(probs) - 1.0) > EXACT:
            raise ValidationError("type probabilities must be positive and sum to 1")
        if any(a <= 0 for a in policies):
            raise ValidationError("beta policies must be positive")

    @property
    def levels(self) -> tuple[float, ...]:
        """Distinct policy values actually played, ascending."""
        return tuple(sorted(set(self.policies)))

    @property
    def level_probs(self) -> tuple[float, ...]:
        levels = self.levels
        return tuple(
            sum(p for a, p in zip(self.policies, self.type_probs) if a == lvl)
            for lvl in levels
        )

    @property
    def is_degenerate(self) -> bool:
        return len(self.levels) == 1

    def sigma(self) -> np.ndarray:
        p = np.array(self.level_probs)
        return np.outer(p, p)


def assignment_for(scenario: Scenario, policies: tuple[float, ...]) -> StrategyAssignment:
    """Assignment of the scenario's beta types to the given grid policies."""
    grid = scenario.beta_axis.values
    for a in policies:
        if a not in grid:
            raise ValidationError(f"policy {a!r} is not on candidate beta's grid")
    return StrategyAssignment(
        scenario.beta_types.type_values, scenario.beta_types.type_probs, policies
    )


@dataclass(frozen=True)
class EquilibriumRecord:
    """One symmetric equilibrium with its matrices and attention diagnostics."""

    kind: str                      # "baseline" | "noisy" | "commitment"
    assignment: StrategyAssignment
    triple: MatrixTriple
    attention: tuple[tuple[float, AttentionSolution], ...]  # (group type, solution)
    attentive: tuple[tuple[float, bool], ...]
    gaps: tuple[tuple[float, float], ...]  # (beta type, deviation slack)
    min_gap: float
    expected_w: np.ndarray | None = None   # per-profile winning prob under noisy news

    def solution_for(self, t: float) -> AttentionSolution:
        for group_t, sol in self.attention:
            if group_t == t:
                return sol
        raise KeyError(f"no attention solution stored for group {t!r}")

    def total_information(self, weights: dict[float, float]) -> float:
        """Weighted mutual information summed over voter groups (nats)."""
        return sum(weights[t] * sol.info for t, sol in self.attention)


# ---------------------------------------------------------------------------
# Values, beliefs, winners
# ---------------------------------------------------------------------------

def _u_vec(spec: UtilitySpec, a: np.ndarray, t: float) -> np.ndarray:
    if spec.family == "absolute":
        return -np.abs(t - a)
    if spec.family == "quadratic":
        return -np.square(t - a)
    assert spec.table is not None
    return np.array([spec.table.lookup(float(ai), t) for ai in np.atleast_1d(a)])


def value_matrix(spec: UtilitySpec, a_values, t: float) -> np.ndarray:
    """v[i, j] = differential utility of profile (-a_i, a_j) for voter t."""
    a = np.asarray(a_values, dtype=float)
    return _u_vec(spec, a, t)[None, :] - _u_vec(spec, -a, t)[:, None]


def profile_belief(spec: UtilitySpec, a_values, sigma, t: float) -> BeliefOverProfiles:
    """Belief over on-path policy profiles with voter t's differential values."""
    a = tuple(float(x) for x in a_values)
    sigma = np.asarray(sigma, dtype=float)
    support = tuple((-ai, aj) for ai in a for aj in a)
    return BeliefOverProfiles(support, sigma.ravel(), value_matrix(spec, a, t).ravel())


def downsian_winner(spec: UtilitySpec, a_alpha: float, a_beta: float) -> float:
    """Perfect-observation winner: the policy the median voter prefers wins.

    Returns beta's winning probability; a median tie within 1e-12 splits.
    """
    diff = voter_utility(spec, a_beta, 0.0) - voter_utility(spec, a_alpha, 0.0)
    if abs(diff) <= EXACT:
        return 0.5
    return 1.0 if diff > 0 else 0.0


def downsian_matrix(spec: UtilitySpec, a_values) -> np.ndarray:
    a = tuple(float(x) for x in a_values)
    return np.array([[downsian_winner(spec, -ai, aj) for aj in a] for ai in a])


def matrix_triple(scenario: Scenario, assignment: StrategyAssignment) -> MatrixTriple:
    levels = assignment.levels
    return MatrixTriple(levels, assignment.sigma(), downsian_matrix(scenario.utility, levels))


def _share_to_w(share: float) -> float:
    if abs(share - 0.5) <= TOL:
        return 0.5
    return 1.0 if share > 0.5 else 0.0


def perfect_observation_winner(scenario: Scenario, a_alpha: float, a_beta: float) -> float:
    """Winner when every voter observes the profile and best-responds.

    Off-path rule: each voter chooses beta iff their differential utility is
    strictly positive; shares map to {0, 1/2, 1} with the usual tolerance.
    """
    share = sum(
        w
        for t, w in scenario.electorate.groups
        if voter_utility(scenario.utility, a_beta, t) - voter_utility(scenario.utility, a_alpha, t)
        > 0.0
    )
    return _share_to_w(share)


def aggregate_and_rationalize(
    scenario: Scenario, assignment: StrategyAssignment, mu: float | None = None
) -> np.ndarray:
    """Winning matrix implied by every group's optimal attention strategy.

    Solves each voter group's attention problem on the on-path profiles,
    forms the weighted vote share per profile and maps it to {0, 1/2, 1}.
    """
    require_symmetric(scenario)
    mu = scenario.mu if mu is None else mu
    levels = assignment.levels
    sigma = assignment.sigma()
    n = len(levels)
    share = np.zeros((n, n))
    for t, weight in scenario.electorate.groups:
        sol = solve_attention(profile_belief(scenario.utility, levels, sigma, t), mu)
        share += weight * sol.m.reshape(n, n)
    return np.vectorize(_share_to_w)(share)


def rationalized_winner(
    scenario: Scenario,
    assignment: StrategyAssignment,
    profile: tuple[float, float],
    mu: float | None = None,
) -> float:
    """Winning probability of beta at any profile: attention-based on path,
    perfect observation off path."""
    levels = assignment.levels
    a_alpha, a_beta = profile
    if -a_alpha in levels and a_beta in levels:
        w = aggregate_and_rationalize(scenario, assignment, mu)
        return float(w[levels.index(-a_alpha), levels.index(a_beta)])
    return perfect_observation_winner(scenario, a_alpha, a_beta)


# ---------------------------------------------------------------------------
# Candidate incentive compatibility
# ---------------------------------------------------------------------------

def deviation_gaps(own_types, own_policies, grid, opp_types, opp_probs, opp_policies,
                   win_prob, win_value, lose_value):
    """Per-type slack of the assigned policy over the best grid deviation.

    ``win_prob(opp_policy, own_policy)`` is the candidate's own winning
    probability; ``win_value(a, t)`` and ``lose_value(opp_policy, opp_type, t)``
    price the two outcomes.  A single-point grid leaves infinite slack.
    """
    gaps = []
    for t, a_star in zip(own_types, own_policies):
        payoffs = []
        for a in grid:
            wv = win_value(a, t)
            total = 0.0
            for t2, p2, x2 in zip(opp_types, opp_probs, opp_policies):
                w = win_prob(x2, a)
                total += p2 * (w * wv + (1.0 - w) * lose_value(x2, t2, t))
            payoffs.append(total)
        i_star = grid.index(a_star)
        others = [v for i, v in enumerate(payoffs) if i != i_star]
        gaps.append((t, payoffs[i_star] - max(others) if others else math.inf))
    return gaps


def _two_sided_gaps(scenario: Scenario, assignment: StrategyAssignment, w_beta):
    """Deviation slacks for both candidates given beta's winning-probability
    function ``w_beta(a_alpha, a_beta)``; alpha's game is the mirror."""
    spec = scenario.utility
    b_types = assignment.types
    b_probs = assignment.type_probs
    b_pols = assignment.policies
    a_types = tuple(-t for t in reversed(b_types))
    a_probs = tuple(reversed(b_probs))
    a_pols = tuple(-a for a in reversed(b_pols))

    def win_value(a, t):
        return winner_value(spec, a, t)

    def lose_value(x, _t_opp, t):
        return loser_value(spec, x, t)

    beta = deviation_gaps(
        b_types, b_pols, list(scenario.beta_axis.values),
        a_types, a_probs, a_pols,
        lambda x, a: w_beta(x, a), win_value, lose_value,
    )
    alpha = deviation_gaps(
        a_types, a_pols, list(scenario.alpha_axis.values),
        b_types, b_probs, b_pols,
        lambda x, a: 1.0 - w_beta(a, x), win_value, lose_value,
    )
    return beta, alpha


def check_ic(
    scenario: Scenario,
    assignment: StrategyAssignment,
    w_source: str = "downsian",
    mu: float | None = None,
) -> tuple[bool, dict]:
    """Incentive compatibility of a pure symmetric assignment.

    Deviations are priced by the perfect-observation winner; with
    ``w_source="rationalized"`` the on-path cells instead come from
    aggregating optimal attention strategies.  Returns (ok, slack per
    (candidate, type)).
    """
    require_symmetric(scenario)
    for a in assignment.policies:
        if a not in scenario.beta_axis.values:
            raise ValidationError(f"assigned policy {a!r} is off candidate beta's grid")
    spec = scenario.utility
    if w_source == "downsian":
        def w_beta(x, a):
            return downsian_winner(spec, x, a)
    elif w_source == "rationalized":
        levels = assignment.levels
        on_path = aggregate_and_rationalize(scenario, assignment, mu)

        def w_beta(x, a):
            if -x in levels and a in levels:
                return float(on_path[levels.index(-x), levels.index(a)])
            return perfect_observation_winner(scenario, x, a)
    else:
        raise ValidationError(f"unknown w_source {w_source!r}")

    beta, alpha = _two_sided_gaps(scenario, assignment, w_beta)
    gaps = {("beta", t): g for t, g in beta}
    gaps.update({("alpha", t): g for t, g in alpha})
    return min(gaps.values()) >= -TOL, gaps


# ---------------------------------------------------------------------------
# Equilibrium enumeration
# ---------------------------------------------------------------------------

def build_record(
    scenario: Scenario,
    assignment: StrategyAssignment,
    beta_gaps,
    mu: float | None = None,
    kind: str = "baseline",
    expected_w: np.ndarray | None = None,
    beliefs=None,
) -> EquilibriumRecord:
    """Attach matrices and per-group attention solutions to an IC assignment.

    ``beliefs`` optionally maps group type -> BeliefOverProfiles; the default
    is the belief over on-path policy profiles.
    """
    mu = scenario.mu if mu is None else mu
    levels = assignment.levels
    sigma = assignment.sigma()
    attention = []
    flags = []
    for t, _w in scenario.electorate.groups:
        belief = (
            beliefs[t]
            if beliefs is not None
            else profile_belief(scenario.utility, levels, sigma, t)
        )
        sol = solve_attention(belief, mu)
        attention.append((t, sol))
        flags.append((t, sol.regime == "interior"))
    gaps = tuple(beta_gaps)
    return EquilibriumRecord(
        kind=kind,
        assignment=assignment,
        triple=matrix_triple(scenario, assignment),
        attention=tuple(attention),
        attentive=tuple(flags),
        gaps=gaps,
        min_gap=min(g for _, g in gaps),
        expected_w=expected_w,
    )


def enumerate_equilibria(
    scenario: Scenario,
    mu: float | None = None,
    max_assignments: int = 200_000,
    verify_rationalizable: bool = False,
) -> list[EquilibriumRecord]:
    """All pure symmetric equilibria, in lexicographic policy order.

    Every beta type -> policy map on the grid is checked for incentive
    compatibility under perfect-observation deviation pricing.  Grids whose
    assignment count exceeds ``max_assignments`` are refused outright.
    """
    require_symmetric(scenario)
    grid = scenario.beta_axis.values
    n_types = len(scenario.beta_types.types)
    count = len(grid) ** n_types
    if count > max_assignments:
        raise ValidationError(
            f"{count} assignments exceed the cap {max_assignments}; "
            "raise max_assignments explicitly to search this grid"
        )
    records = []
    for policies in itertools.product(grid, repeat=n_types):
        assignment = assignment_for(scenario, policies)
        ok, gaps = check_ic(scenario, assignment)
        if not ok:
            continue
        beta_gaps = tuple((t, gaps[("beta", t)]) for t in assignment.types)
        record = build_record(scenario, assignment, beta_gaps, mu)
        if verify_rationalizable:
            rationalized = aggregate_and_rationalize(scenario, assignment, mu)
            if not np.array_equal(rationalized, record.triple.w):
                raise NumericError(
                    "aggregated attention strategies do not rationalize the "
                    f"perfect-observation winner for policies {policies}"
                )
        records.append(record)
    return records


# ---------------------------------------------------------------------------
# Attention sets
# ---------------------------------------------------------------------------

def attention_member(spec: UtilitySpec, a_values, sigma, t: float, mu: float) -> bool:
    """Whether voter t pays attention under the policy matrix (a_values, sigma)."""
    return attention_membership(profile_belief(spec, a_values, sigma, t), mu)


def attention_frontier(
    spec: UtilitySpec,
    a1_grid,
    a2_grid,
    t: float,
    mu: float,
    level_probs=(0.5, 0.5),
) -> np.ndarray:
    """Indifference frontier of a two-level attention set as a polyline.

    For each a1, returns the smallest grid a2 > a1 at which voter t pays
    attention (NaN when no grid point qualifies).  Rows are (a1, a2).
    """
    p1, p2 = float(level_probs[0]), float(level_probs[1])
    if abs(p1 + p2 - 1.0) > EXACT or p1 <= 0 or p2 <= 0:
        raise ValidationError("level probabilities must be positive and sum to 1")
    probs = np.array([p1 * p1, p1 * p2, p2 * p1, p2 * p2])
    out = np.full((len(a1_grid), 2), np.nan)
    a2_grid = np.asarray(a2_grid, dtype=float)
    for i, a1 in enumerate(np.asarray(a1_grid, dtype=float)):
        out[i, 0] = a1
        a2 = a2_grid[a2_grid > a1 + EXACT]
        if a2.size == 0:
            continue
        # profiles (-a1,a1), (-a1,a2), (-a2,a1), (-a2,a2) per candidate a2
        diag = voter_utility(spec, a1, t) - voter_utility(spec, -a1, t)
        values = np.stack(
            [
                np.full(a2.shape, diag),
                _u_vec(spec, a2, t) - voter_utility(spec, -a1, t),
                voter_utility(spec, a1, t) - _u_vec(spec, -a2, t),
                _u_vec(spec, a2, t) - _u_vec(spec, -a2, t),
            ],
            axis=-1,
        )
        member = log_mean_exp(values, probs, mu) >= -EXACT
        hits = np.flatnonzero(member)
        if hits.size:
            out[i, 1] = a2[hits[0]]
    return out


def median_differential(spec: UtilitySpec, a_values) -> float:
    """Median-voter utility spread u(a_1, 0) - u(a_N, 0) of a policy matrix."""
    a = tuple(a_values)
    return voter_utility(spec, a[0], 0.0) - voter_utility(spec, a[-1], 0.0)


def truncation_statistic(
    scenario: Scenario,
    records: list[EquilibriumRecord],
    t: float,
    mu: float | None = None,
) -> tuple[tuple[EquilibriumRecord, ...], float | None]:
    """Equilibria that retain voter t's attention, and the smallest
    median-utility spread among them (None when the set is empty)."""
    mu = scenario.mu if mu is None else mu
    kept = tuple(
        r
        for r in records
        if attention_member(scenario.utility, r.triple.a_values, r.triple.sigma, t, mu)
    )
    if not kept:
        return kept, None
    return kept, min(median_differential(scenario.utility, r.triple.a_values) for r in kept)
