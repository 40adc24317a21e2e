"""Primitives of the electoral game: policy grids, utility families, populations.

Everything here is an immutable value object or a pure function, safe to share
across threads.  Structural identities (mirror symmetry, increasing
differences, concavity, the partisan-gap constant) are audited numerically on
the configured finite grids instead of being trusted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

if TYPE_CHECKING:  # pragma: no cover - import only for annotations
    from .news import NewsTechnology

TOL = 1e-9      # default tolerance for threshold comparisons
EXACT = 1e-12   # tolerance for identities expected to hold to rounding error

VoterFamily = Literal["absolute", "quadratic", "table"]
Side = Literal["alpha", "beta"]


class ValidationError(ValueError):
    """An input violates a documented invariant."""


class SymmetryError(ValidationError):
    """A mirror-symmetric game was required but not supplied."""


class NumericError(ArithmeticError):
    """A numerical routine produced non-finite intermediates."""


# ---------------------------------------------------------------------------
# Policy grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolicyAxis:
    """Finite policy grid for one candidate.

    Candidate beta draws from (0, 1], candidate alpha from [-1, 0); a
    symmetric game uses exact mirror grids (``axis.mirrored()``).
    """

    values: tuple[float, ...]
    side: Side = "beta"

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValidationError("policy axis is empty")
        if any(hi <= lo for lo, hi in zip(vals, vals[1:])):
            raise ValidationError("policy values must be strictly increasing")
        if self.side == "beta":
            if vals[0] <= 0.0 or vals[-1] > 1.0:
                raise ValidationError("beta policies must lie in (0, 1]")
        elif self.side == "alpha":
            if vals[0] < -1.0 or vals[-1] >= 0.0:
                raise ValidationError("alpha policies must lie in [-1, 0)")
        else:
            raise ValidationError(f"unknown candidate side {self.side!r}")

    def mirrored(self) -> PolicyAxis:
        other: Side = "alpha" if self.side == "beta" else "beta"
        return PolicyAxis(tuple(-v for v in reversed(self.values)), other)

    def is_mirror_of(self, other: PolicyAxis) -> bool:
        return (
            self.side != other.side
            and len(self.values) == len(other.values)
            and all(a == -b for a, b in zip(self.values, reversed(other.values)))
        )


# ---------------------------------------------------------------------------
# Utility families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TabulatedUtility:
    """Custom voter utility given on a rectangular (policy, type) grid."""

    a_values: tuple[float, ...]
    t_values: tuple[float, ...]
    u: tuple[tuple[float, ...], ...]  # u[i][j] at (a_values[i], t_values[j])

    def __post_init__(self) -> None:
        object.__setattr__(self, "a_values", tuple(float(a) for a in self.a_values))
        object.__setattr__(self, "t_values", tuple(float(t) for t in self.t_values))
        object.__setattr__(self, "u", tuple(tuple(float(x) for x in row) for row in self.u))
        if any(hi <= lo for lo, hi in zip(self.a_values, self.a_values[1:])):
            raise ValidationError("tabulated policy grid must be strictly increasing")
        if any(hi <= lo for lo, hi in zip(self.t_values, self.t_values[1:])):
            raise ValidationError("tabulated type grid must be strictly increasing")
        if len(self.u) != len(self.a_values) or any(
            len(row) != len(self.t_values) for row in self.u
        ):
            raise ValidationError("utility table shape does not match its grids")

    def _index(self, grid: tuple[float, ...], x: float, what: str) -> int:
        for i, g in enumerate(grid):
            if abs(g - x) <= EXACT:
                return i
        raise KeyError(f"{what}={x!r} is not on the utility table grid")

    def lookup(self, a: float, t: float) -> float:
        return self.u[self._index(self.a_values, a, "policy")][
            self._index(self.t_values, t, "type")
        ]


@dataclass(frozen=True)
class UtilitySpec:
    """Voter utility family plus the candidates' winner/loser parameters.

    ``loser_sign`` controls the sign of the loser's policy term: the losing
    candidate of type t receives ``-loser_sign * lose_weight * u(a_winner, t)``
    (so +1 rewards distance from the implemented policy, -1 penalises it).
    """

    family: VoterFamily = "absolute"
    office_rent: float = 0.0    # R
    win_weight: float = 0.0     # weight on the winner's policy term
    lose_weight: float = 0.0    # weight on the loser's policy term
    loser_sign: int = 1
    kappa: float | None = None  # partisan-gap constant; derived when None
    table: TabulatedUtility | None = None

    def __post_init__(self) -> None:
        if self.family not in ("absolute", "quadratic", "table"):
            raise ValidationError(f"unknown utility family {self.family!r}")
        if self.family == "table" and self.table is None:
            raise ValidationError("family 'table' requires a utility table")
        if self.office_rent < 0 or self.win_weight < 0 or self.lose_weight < 0:
            raise ValidationError("office rent and preference weights must be >= 0")
        if self.loser_sign not in (1, -1):
            raise ValidationError("loser_sign must be +1 or -1")
        if self.kappa is not None and self.kappa <= 0:
            raise ValidationError("kappa must be positive")


def voter_utility(spec: UtilitySpec, a: float, t: float) -> float:
    """u(a, t) for the selected family."""
    if spec.family == "absolute":
        return -abs(t - a)
    if spec.family == "quadratic":
        d = t - a
        return -d * d
    assert spec.table is not None
    return spec.table.lookup(a, t)


def differential_utility(spec: UtilitySpec, profile: tuple[float, float], t: float) -> float:
    """v(a, t): gain of the beta policy over the alpha policy for voter t."""
    a_alpha, a_beta = profile
    return voter_utility(spec, a_beta, t) - voter_utility(spec, a_alpha, t)


def winner_value(spec: UtilitySpec, a: float, t: float) -> float:
    """Utility of a type-t candidate who wins and implements policy a."""
    return spec.office_rent + spec.win_weight * voter_utility(spec, a, t)


def loser_value(spec: UtilitySpec, a_winner: float, t: float) -> float:
    """Utility of a type-t candidate who loses while a_winner is implemented."""
    return -spec.loser_sign * spec.lose_weight * voter_utility(spec, a_winner, t)


def candidate_stage_payoffs(
    spec: UtilitySpec, a: float, a_opponent: float, t: float
) -> tuple[float, float]:
    """(value if winning with policy a, value if losing to a_opponent) for type t."""
    return winner_value(spec, a, t), loser_value(spec, a_opponent, t)


def derived_kappa(
    spec: UtilitySpec,
    alpha_values: tuple[float, ...],
    beta_values: tuple[float, ...],
    positive_types: tuple[float, ...] = (),
) -> float:
    """Partisan-gap constant: built-in families have closed forms, tables are
    minimised by brute force over the configured grids."""
    if spec.kappa is not None:
        return spec.kappa
    if spec.family == "absolute":
        return 2.0 * beta_values[0]
    if spec.family == "quadratic":
        return 4.0 * beta_values[0]
    ts = [t for t in positive_types if t > 0]
    if not ts:
        raise ValidationError("deriving kappa for a table needs positive voter types")
    kappa = math.inf
    for t in ts:
        for x in alpha_values:
            for y in beta_values:
                gap = differential_utility(spec, (x, y), t) - differential_utility(
                    spec, (x, y), 0.0
                )
                kappa = min(kappa, gap / t)
    if not math.isfinite(kappa) or kappa <= 0:
        raise ValidationError("table utility admits no positive partisan-gap constant")
    return kappa


# ---------------------------------------------------------------------------
# Populations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CandidateSpec:
    """Finite type distribution of one candidate; types sorted ascending."""

    types: tuple[tuple[float, float], ...]  # (type, probability)
    side: Side = "beta"

    def __post_init__(self) -> None:
        pairs = tuple(sorted((float(t), float(p)) for t, p in self.types))
        object.__setattr__(self, "types", pairs)
        if not pairs:
            raise ValidationError("candidate has no types")
        if any(p <= 0 for _, p in pairs):
            raise ValidationError("type probabilities must be positive")
        if abs(sum(p for _, p in pairs) - 1.0) > EXACT:
            raise ValidationError("type probabilities must sum to 1")
        if any(t2 == t1 for (t1, _), (t2, _) in zip(pairs, pairs[1:])):
            raise ValidationError("duplicate candidate types")
        lo, hi = pairs[0][0], pairs[-1][0]
        if self.side == "beta" and (lo <= 0 or hi > 1):
            raise ValidationError("beta types must lie in (0, 1]")
        if self.side == "alpha" and (lo < -1 or hi >= 0):
            raise ValidationError("alpha types must lie in [-1, 0)")

    @property
    def type_values(self) -> tuple[float, ...]:
        return tuple(t for t, _ in self.types)

    @property
    def type_probs(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.types)

    def mirrored(self) -> CandidateSpec:
        other: Side = "alpha" if self.side == "beta" else "beta"
        return CandidateSpec(tuple((-t, p) for t, p in reversed(self.types)), other)

    def is_mirror_of(self, other: CandidateSpec) -> bool:
        mine = self.mirrored()
        return (
            self.side != other.side
            and len(mine.types) == len(other.types)
            and all(
                a == b and abs(p - q) <= EXACT
                for (a, p), (b, q) in zip(mine.types, other.types)
            )
        )


@dataclass(frozen=True)
class Electorate:
    """Finite weighted voter groups standing in for a continuous type density."""

    groups: tuple[tuple[float, float], ...]  # (type, weight)

    def __post_init__(self) -> None:
        pairs = tuple(sorted((float(t), float(w)) for t, w in self.groups))
        object.__setattr__(self, "groups", pairs)
        if not pairs:
            raise ValidationError("electorate has no groups")
        if any(w <= 0 for _, w in pairs):
            raise ValidationError("group weights must be positive")
        if any(not -1 <= t <= 1 for t, _ in pairs):
            raise ValidationError("group types must lie in [-1, 1]")
        if any(t2 == t1 for (t1, _), (t2, _) in zip(pairs, pairs[1:])):
            raise ValidationError("duplicate voter group types")
        if abs(sum(w for _, w in pairs) - 1.0) > EXACT:
            raise ValidationError("group weights must sum to 1")

    @property
    def group_types(self) -> tuple[float, ...]:
        return tuple(t for t, _ in self.groups)

    def is_symmetric(self) -> bool:
        table = {t: w for t, w in self.groups}
        return all(-t in table and abs(table[-t] - w) <= EXACT for t, w in self.groups)


# ---------------------------------------------------------------------------
# Scenario
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    """A full game description; optional sections switch on the extensions."""

    alpha_axis: PolicyAxis
    beta_axis: PolicyAxis
    utility: UtilitySpec
    alpha_types: CandidateSpec
    beta_types: CandidateSpec
    electorate: Electorate
    mu: float
    news: "NewsTechnology | None" = None
    eta: float = 1.0
    dissemination_cost: float | None = None

    def __post_init__(self) -> None:
        if self.alpha_axis.side != "alpha" or self.beta_axis.side != "beta":
            raise ValidationError("scenario axes are on the wrong sides")
        if self.alpha_types.side != "alpha" or self.beta_types.side != "beta":
            raise ValidationError("scenario candidate specs are on the wrong sides")
        if not self.mu > 0:
            raise ValidationError("marginal attention cost mu must be positive")
        if not 0.0 <= self.eta <= 1.0:
            raise ValidationError("commitment level eta must lie in [0, 1]")
        if self.dissemination_cost is not None and self.dissemination_cost < 0:
            raise ValidationError("dissemination cost must be >= 0")

    @classmethod
    def symmetric(
        cls,
        beta_policies: tuple[float, ...],
        utility: UtilitySpec,
        beta_types: tuple[tuple[float, float], ...],
        electorate_groups: tuple[tuple[float, float], ...],
        mu: float,
        news: "NewsTechnology | None" = None,
        eta: float = 1.0,
        dissemination_cost: float | None = None,
    ) -> Scenario:
        """Build a mirror-symmetric scenario from candidate beta's half."""
        beta_axis = PolicyAxis(beta_policies, "beta")
        bspec = CandidateSpec(beta_types, "beta")
        return cls(
            alpha_axis=beta_axis.mirrored(),
            beta_axis=beta_axis,
            utility=utility,
            alpha_types=bspec.mirrored(),
            beta_types=bspec,
            electorate=Electorate(electorate_groups),
            mu=mu,
            news=news,
            eta=eta,
            dissemination_cost=dissemination_cost,
        )

    def kappa(self) -> float:
        positive = tuple(t for t in self.electorate.group_types if t > 0)
        return derived_kappa(self.utility, self.alpha_axis.values, self.beta_axis.values, positive)


def symmetry_failures(scenario: Scenario) -> list[str]:
    """Reasons the scenario is not mirror-symmetric (empty list when it is)."""
    problems: list[str] = []
    if not scenario.beta_axis.is_mirror_of(scenario.alpha_axis):
        problems.append("policy axes are not exact mirror images")
    if not scenario.beta_types.is_mirror_of(scenario.alpha_types):
        problems.append("candidate type distributions are not mirror images")
    if not scenario.electorate.is_symmetric():
        problems.append("electorate is not symmetric around the median")
    if scenario.utility.family == "table":
        a_grid = scenario.alpha_axis.values + scenario.beta_axis.values
        t_grid = scenario.electorate.group_types + scenario.beta_types.type_values
        t_grid = t_grid + tuple(-t for t in t_grid)
        problems += audit_mirror_symmetry(scenario.utility, a_grid, t_grid)
    return problems


def require_symmetric(scenario: Scenario) -> None:
    problems = symmetry_failures(scenario)
    if problems:
        raise SymmetryError(
            "symmetric-equilibrium routine refused an asymmetric scenario: "
            + "; ".join(problems)
        )


# ---------------------------------------------------------------------------
# Numerical audits of the maintained assumptions
# ---------------------------------------------------------------------------

def audit_mirror_symmetry(
    spec: UtilitySpec, a_values: tuple[float, ...], t_values: tuple[float, ...]
) -> list[str]:
    """Check u(a, t) == u(-a, -t) on the grid (exact for built-in families)."""
    problems = []
    for a in a_values:
        for t in t_values:
            try:
                lhs = voter_utility(spec, a, t)
                rhs = voter_utility(spec, -a, -t)
            except KeyError as exc:
                problems.append(f"mirror symmetry untestable: {exc}")
                continue
            if abs(lhs - rhs) > EXACT:
                problems.append(f"u({a},{t}) != u({-a},{-t}): {lhs} vs {rhs}")
    return problems


def audit_increasing_differences(
    spec: UtilitySpec, a_values: tuple[float, ...], t_values: tuple[float, ...]
) -> list[str]:
    """Increasing differences of u in (a, t) on the grid.

    Weak monotonicity is required everywhere; strictness only where the type
    pair overlaps the policy pair (the absolute-loss family is flat for
    voters more extreme than both policies).
    """
    problems = []
    for a, a2 in zip(a_values, a_values[1:]):
        for t, t2 in zip(t_values, t_values[1:]):
            inc_hi = voter_utility(spec, a2, t2) - voter_utility(spec, a, t2)
            inc_lo = voter_utility(spec, a2, t) - voter_utility(spec, a, t)
            gap = inc_hi - inc_lo
            if gap < -EXACT:
                problems.append(f"decreasing differences at a in ({a},{a2}), t in ({t},{t2})")
            elif gap <= EXACT and max(t, a) < min(t2, a2):
                problems.append(f"flat differences at a in ({a},{a2}), t in ({t},{t2})")
    return problems


def audit_concavity(
    spec: UtilitySpec, a_values: tuple[float, ...], t_values: tuple[float, ...]
) -> list[str]:
    """Discrete concavity of u(., t): chord slopes must not increase."""
    problems = []
    for t in t_values:
        for a0, a1, a2 in zip(a_values, a_values[1:], a_values[2:]):
            s01 = (voter_utility(spec, a1, t) - voter_utility(spec, a0, t)) / (a1 - a0)
            s12 = (voter_utility(spec, a2, t) - voter_utility(spec, a1, t)) / (a2 - a1)
            if s12 > s01 + EXACT:
                problems.append(f"convex kink of u(., {t}) at {a1}")
    return problems


def audit_partisan_gap(
    spec: UtilitySpec,
    alpha_values: tuple[float, ...],
    beta_values: tuple[float, ...],
    positive_types: tuple[float, ...],
    kappa: float,
) -> list[str]:
    """min over profiles of v(a, t) - v(a, 0) must exceed kappa * t for t > 0."""
    problems = []
    for t in positive_types:
        if t <= 0:
            continue
        worst = min(
            differential_utility(spec, (x, y), t) - differential_utility(spec, (x, y), 0.0)
            for x in alpha_values
            for y in beta_values
        )
        if worst < kappa * t - EXACT:
            problems.append(f"partisan gap {worst} below kappa*t = {kappa * t} at t={t}")
    return problems


def audit_scenario(scenario: Scenario) -> list[str]:
    """All maintained-assumption audits on the configured grids."""
    a_grid = tuple(sorted(set(scenario.alpha_axis.values + scenario.beta_axis.values)))
    t_grid = tuple(
        sorted(
            set(
                scenario.electorate.group_types
                + scenario.beta_types.type_values
                + scenario.alpha_types.type_values
            )
        )
    )
    mirrored_a = tuple(sorted(set(a_grid + tuple(-a for a in a_grid))))
    problems = symmetry_failures(scenario)
    problems += audit_increasing_differences(scenario.utility, mirrored_a, t_grid)
    problems += audit_concavity(scenario.utility, mirrored_a, t_grid)
    positive = tuple(t for t in scenario.electorate.group_types if t > 0)
    if positive:
        try:
            kappa = scenario.kappa()
        except ValidationError as exc:
            problems.append(str(exc))
        else:
            problems += audit_partisan_gap(
                scenario.utility,
                scenario.alpha_axis.values,
                scenario.beta_axis.values,
                positive,
                kappa,
            )
    return problems
