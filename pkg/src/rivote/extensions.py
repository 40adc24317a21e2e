"""Model extensions: costly dissemination, limited commitment, two-issue games.

Each extension rewrites a piece of the baseline game (an equilibrium filter,
a transformed differential utility, an augmented single-issue utility) and
then reuses the same solver and enumeration machinery.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator

from .core import (
    EXACT,
    TOL,
    Scenario,
    TabulatedUtility,
    UtilitySpec,
    ValidationError,
    loser_value,
    require_symmetric,
    winner_value,
)
from .election import (
    EquilibriumRecord,
    StrategyAssignment,
    build_record,
    deviation_gaps,
    downsian_winner,
    value_matrix,
)
from .solver import BeliefOverProfiles, attention_membership, entropy


# ---------------------------------------------------------------------------
# Costly information dissemination
# ---------------------------------------------------------------------------

def dissemination_filter(
    records: list[EquilibriumRecord], scenario: Scenario, cost: float
) -> tuple[EquilibriumRecord, ...]:
    """Keep equilibria whose electorate-wide mutual information covers ``cost``.

    The no-loss requirement compares the weighted sum of per-group attention
    levels (nats) against the fixed dissemination cost.
    """
    weights = dict(scenario.electorate.groups)
    if records:
        h_max = max(entropy(r.triple.sigma.ravel()) for r in records)
        if not 0.0 < cost < h_max:
            warnings.warn(
                f"dissemination cost {cost} outside (0, {h_max:.6g}); "
                "the filter degenerates",
                stacklevel=2,
            )
    return tuple(r for r in records if r.total_information(weights) >= cost - EXACT)


# ---------------------------------------------------------------------------
# Limited commitment
# ---------------------------------------------------------------------------

def commitment_value(eta: float, v_policy: float, v_type: float) -> float:
    """Blend of the proposal-based and type-based differential utilities."""
    if not 0.0 <= eta <= 1.0:
        raise ValidationError("eta must lie in [0, 1]")
    return eta * v_policy + (1.0 - eta) * v_type


def commitment_assignments(scenario: Scenario):
    """Strictly increasing type -> policy maps, in lexicographic order."""
    n_types = len(scenario.beta_types.types)
    return itertools.combinations(scenario.beta_axis.values, n_types)


def commitment_belief(
    scenario: Scenario, assignment: StrategyAssignment, t: float, eta: float | None = None
) -> BeliefOverProfiles:
    """Belief over proposal profiles whose values mix the proposal and the
    proposer's own type (played when the winner reneges)."""
    eta = scenario.eta if eta is None else eta
    if any(hi <= lo for lo, hi in zip(assignment.policies, assignment.policies[1:])):
        raise ValidationError("limited commitment requires strictly increasing policies")
    spec = scenario.utility
    policies = assignment.policies
    types = assignment.types
    v_pol = value_matrix(spec, policies, t)
    v_typ = value_matrix(spec, types, t)
    values = eta * v_pol + (1.0 - eta) * v_typ
    p = np.array(assignment.type_probs)
    support = tuple((-ai, aj) for ai in policies for aj in policies)
    return BeliefOverProfiles(support, np.outer(p, p).ravel(), values.ravel())


def attention_member_commitment(
    scenario: Scenario,
    assignment: StrategyAssignment,
    t: float,
    mu: float | None = None,
    eta: float | None = None,
) -> bool:
    mu = scenario.mu if mu is None else mu
    return attention_membership(commitment_belief(scenario, assignment, t, eta), mu)


def check_ic_commitment(
    scenario: Scenario, assignment: StrategyAssignment, eta: float | None = None
) -> tuple[bool, dict]:
    """Incentive compatibility when the winner reneges with probability 1-eta.

    Types double as fallback policies, so both stage values blend the
    proposal with the proposer's type; deviations are priced by the
    perfect-observation winner on proposals.
    """
    require_symmetric(scenario)
    eta = scenario.eta if eta is None else eta
    if not 0.0 <= eta <= 1.0:
        raise ValidationError("eta must lie in [0, 1]")
    spec = scenario.utility

    def win_value(a, t):
        return eta * winner_value(spec, a, t) + (1.0 - eta) * winner_value(spec, t, t)

    def lose_value(x, t_opp, t):
        return eta * loser_value(spec, x, t) + (1.0 - eta) * loser_value(spec, t_opp, t)

    def w_beta(x, a):
        return downsian_winner(spec, x, a)

    b_types = assignment.types
    b_probs = assignment.type_probs
    b_pols = assignment.policies
    a_types = tuple(-t for t in reversed(b_types))
    a_probs = tuple(reversed(b_probs))
    a_pols = tuple(-a for a in reversed(b_pols))
    beta = deviation_gaps(
        b_types, b_pols, list(scenario.beta_axis.values),
        a_types, a_probs, a_pols, w_beta, win_value, lose_value,
    )
    alpha = deviation_gaps(
        a_types, a_pols, list(scenario.alpha_axis.values),
        b_types, b_probs, b_pols,
        lambda x, a: 1.0 - w_beta(a, x), win_value, lose_value,
    )
    gaps = {("beta", t): g for t, g in beta}
    gaps.update({("alpha", t): g for t, g in alpha})
    return min(gaps.values()) >= -TOL, gaps


def enumerate_equilibria_commitment(
    scenario: Scenario,
    eta: float | None = None,
    mu: float | None = None,
) -> list[EquilibriumRecord]:
    """Equilibria in strictly increasing pure symmetric strategies under
    limited commitment; at eta = 1 this reduces to the baseline game."""
    require_symmetric(scenario)
    eta = scenario.eta if eta is None else eta
    records = []
    for policies in commitment_assignments(scenario):
        assignment = StrategyAssignment(
            scenario.beta_types.type_values, scenario.beta_types.type_probs, policies
        )
        ok, gaps = check_ic_commitment(scenario, assignment, eta)
        if not ok:
            continue
        beliefs = {
            t: commitment_belief(scenario, assignment, t, eta)
            for t, _ in scenario.electorate.groups
        }
        beta_gaps = tuple((t, gaps[("beta", t)]) for t in assignment.types)
        records.append(
            build_record(scenario, assignment, beta_gaps, mu, kind="commitment", beliefs=beliefs)
        )
    return records


# ---------------------------------------------------------------------------
# Two issues reduced to one
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Frontier:
    """Feasible trade-off curve b = B(a) between the two issues."""

    b: Callable[[float], float]
    b_prime: Callable[[float], float]
    label: str = "custom"


def quarter_circle_frontier() -> Frontier:
    """Preset frontier: quarter circle of radius 2 centred at (-1, -1), with
    zero slope at a = -1 and unbounded slope at a = 1."""

    def b(a: float) -> float:
        return -1.0 + math.sqrt(max(4.0 - (a + 1.0) ** 2, 0.0))

    def b_prime(a: float) -> float:
        rad = 4.0 - (a + 1.0) ** 2
        if rad <= 0:
            return -math.inf
        return -(a + 1.0) / math.sqrt(rad)

    return Frontier(b, b_prime, label="quarter_circle")


def tabulated_frontier(a_points, b_points) -> Frontier:
    """Shape-preserving (monotone cubic) interpolation of frontier samples."""
    a = np.asarray(a_points, dtype=float)
    bv = np.asarray(b_points, dtype=float)
    if a.ndim != 1 or a.shape != bv.shape or a.size < 3:
        raise ValidationError("frontier table needs matching 1-d samples (>= 3)")
    if np.any(np.diff(a) <= 0) or np.any(np.diff(bv) >= 0):
        raise ValidationError("frontier samples must be increasing in a, decreasing in b")
    interp = PchipInterpolator(a, bv)
    deriv = interp.derivative()
    return Frontier(lambda x: float(interp(x)), lambda x: float(deriv(x)), label="table")


def audit_frontier(frontier: Frontier, n: int = 201) -> list[str]:
    """Strict decrease, strict concavity and the endpoint slope conditions,
    checked at sampling resolution on [-1, 1]."""
    grid = np.linspace(-1.0, 1.0, n)
    vals = np.array([frontier.b(a) for a in grid])
    problems = []
    if np.any(np.diff(vals) >= 0):
        problems.append("frontier is not strictly decreasing on the sample")
    slopes = np.diff(vals) / np.diff(grid)
    if np.any(np.diff(slopes) >= 0):
        problems.append("frontier is not strictly concave on the sample")
    h = grid[1] - grid[0]
    if abs(frontier.b_prime(-1.0 + h)) > 2.0 * math.sqrt(h):
        problems.append("frontier slope at the left endpoint is not near zero")
    if frontier.b_prime(1.0 - h) > -0.5 / math.sqrt(h):
        problems.append("frontier slope at the right endpoint is not steep")
    return problems


def weighted_bliss_utility(bliss: float = 2.0, slope: float = 0.5):
    """Preset two-issue utility: concave bliss-point pulls on both issues with
    type-dependent weights; higher types weigh issue b more."""
    if not 0.0 < slope < 1.0:
        raise ValidationError("weight slope must lie in (0, 1)")

    def u2(a: float, b: float, t: float) -> float:
        return -(1.0 - slope * t) * (a - bliss) ** 2 - (1.0 + slope * t) * (b - bliss) ** 2

    return u2


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Golden-section maximiser of a unimodal function on [lo, hi]."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


@dataclass(frozen=True)
class MultiIssueReduction:
    """Augmented single-issue economy produced from a two-issue utility."""

    frontier: Frontier
    a_grid: tuple[float, ...]
    t_grid: tuple[float, ...]
    uhat_table: np.ndarray            # shape (len(t_grid), len(a_grid))
    tangency: tuple[float, ...]       # argmax of uhat(., t) per sampled type
    problems: tuple[str, ...]         # failed monotonicity/concavity checks
    sid_checked: bool                 # sign conditions for increasing differences held
    sid_ok: bool | None

    def utility_spec(self, **spec_kwargs) -> UtilitySpec:
        """Tabulated voter utility for the augmented single-issue game."""
        table = TabulatedUtility(
            self.a_grid,
            self.t_grid,
            tuple(tuple(self.uhat_table[:, i]) for i in range(len(self.a_grid))),
        )
        return UtilitySpec(family="table", table=table, **spec_kwargs)


def _central(f, x: float, h: float = 1e-5):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def multi_issue_reduce(
    u2,
    frontier: Frontier,
    a_grid=None,
    t_grid=None,
    lattice: int = 21,
    tangency_tol: float = 1e-10,
) -> MultiIssueReduction:
    """Collapse a two-issue utility onto the frontier.

    Audits monotonicity of ``u2`` in both issues and the single-crossing
    condition (the indifference-curve slope -u2_a/u2_b must strictly increase
    in the type) on a coarse lattice, refusing on the first violation.  The
    augmented utility uhat(a, t) = u2(a, B(a), t) is tabulated on ``a_grid``,
    tangency points are located by golden-section search, and the shape
    properties expected of uhat are verified by finite differences.
    """
    a_grid = np.linspace(-1.0, 1.0, 200) if a_grid is None else np.asarray(a_grid, float)
    t_grid = np.linspace(-1.0, 1.0, 21) if t_grid is None else np.asarray(t_grid, float)
    lat = np.linspace(-1.0, 1.0, lattice)
    eps = 1e-9

    # monotonicity of u2 in each issue
    for t in (t_grid[0], 0.0, t_grid[-1]):
        for a in lat:
            for b in lat:
                if _central(lambda x: u2(x, b, t), a) <= eps:
                    raise ValidationError(f"u2 is not strictly increasing in a at {(a, b, t)}")
                if _central(lambda x: u2(a, x, t), b) <= eps:
                    raise ValidationError(f"u2 is not strictly increasing in b at {(a, b, t)}")

    # single crossing: -u2_a/u2_b strictly increasing in t
    interior = lat[1:-1]
    for a in interior:
        for b in interior:
            slopes = [
                -_central(lambda x: u2(x, b, t), a) / _central(lambda x: u2(a, x, t), b)
                for t in t_grid
            ]
            for t1, t2, s1, s2 in zip(t_grid, t_grid[1:], slopes, slopes[1:]):
                if s2 <= s1 + EXACT:
                    raise ValidationError(
                        f"single crossing fails at (a, b)={(a, b)}: slope at t={t2} "
                        f"does not exceed slope at t={t1}"
                    )

    def uhat(a: float, t: float) -> float:
        return u2(a, frontier.b(a), t)

    table = np.array([[uhat(a, t) for a in a_grid] for t in t_grid])
    tangency = tuple(golden_max(lambda a: uhat(a, t), -1.0, 1.0, tangency_tol) for t in t_grid)

    problems: list[str] = []
    for row, t, a_star in zip(table, t_grid, tangency):
        diffs = np.diff(row)
        before = a_grid[1:] <= a_star
        after = a_grid[:-1] >= a_star
        if np.any(diffs[before] <= -eps):
            problems.append(f"uhat(., {t}) is not increasing left of its peak")
        if np.any(diffs[after] >= eps):
            problems.append(f"uhat(., {t}) is not decreasing right of its peak")
        second = np.diff(row, 2)
        if np.any(second > -EXACT):
            problems.append(f"uhat(., {t}) is not strictly concave on the grid")

    # increasing differences only asserted under the sign conditions on u2_at, u2_bt
    u_at = []
    u_bt = []
    for a in interior:
        for b in interior:
            u_at.append(_central(lambda t: _central(lambda x: u2(x, b, t), a), 0.0, 1e-4))
            u_bt.append(_central(lambda t: _central(lambda x: u2(a, x, t), b), 0.0, 1e-4))
    gate = (
        all(x >= -eps for x in u_at)
        and all(x <= eps for x in u_bt)
        and (any(x > eps for x in u_at) or any(x < -eps for x in u_bt))
    )
    sid_ok: bool | None = None
    if gate:
        inc = np.diff(table, axis=1)
        sid_ok = bool(np.all(np.diff(inc, axis=0) >= -EXACT))

    return MultiIssueReduction(
        frontier=frontier,
        a_grid=tuple(float(a) for a in a_grid),
        t_grid=tuple(float(t) for t in t_grid),
        uhat_table=table,
        tangency=tangency,
        problems=tuple(problems),
        sid_checked=gate,
        sid_ok=sid_ok,
    )
