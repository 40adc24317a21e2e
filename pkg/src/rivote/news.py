"""Noisy news technologies over finite signal grids.

A technology gives candidate beta's signal pmf per policy; candidate alpha's
is the mirror image by construction, so the symmetric-environment requirement
holds identically.  Garbling post-composes a Markov kernel per candidate and
preserves the representation, which makes Blackwell comparisons constructive.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    EXACT,
    TOL,
    Scenario,
    UtilitySpec,
    ValidationError,
    require_symmetric,
)
from .election import (
    EquilibriumRecord,
    StrategyAssignment,
    _two_sided_gaps,
    assignment_for,
    build_record,
    value_matrix,
)
from .solver import AttentionSolution, BeliefOverProfiles, log_mean_exp, solve_attention


@dataclass(frozen=True)
class MarkovKernel:
    """Row-stochastic garbling kernel on one candidate's signal grid.

    The opposite candidate is garbled by the mirror kernel, so a single
    matrix describes a symmetric garble of the whole technology.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError("garbling kernel must be a square matrix")
        if np.any(m < 0):
            raise ValidationError("garbling kernel entries must be nonnegative")
        if np.max(np.abs(m.sum(axis=1) - 1.0)) > EXACT:
            raise ValidationError("garbling kernel rows must sum to 1")

    @property
    def order(self) -> int:
        return self.matrix.shape[0]

    def product(self) -> np.ndarray:
        """Kernel on the product signal space, row-major over (alpha, beta)."""
        return np.kron(self.matrix, self.matrix)

    @staticmethod
    def identity(k: int) -> MarkovKernel:
        return MarkovKernel(np.eye(k))

    @staticmethod
    def uniform(k: int) -> MarkovKernel:
        """Total garbling: every signal is remapped to the uniform draw."""
        return MarkovKernel(np.full((k, k), 1.0 / k))

    @staticmethod
    def slant_shift(lam: float) -> MarkovKernel:
        """Two-signal kernel moving mass ``lam`` from the centrist report to
        the extreme one."""
        if not 0.0 <= lam <= 1.0:
            raise ValidationError("shift weight must lie in [0, 1]")
        return MarkovKernel(np.array([[1.0 - lam, lam], [0.0, 1.0]]))


class NewsTechnology:
    """Per-policy signal pmf of candidate beta on an increasing signal grid."""

    def __init__(self, signals, row_fn, label: str = "custom"):
        sig = tuple(float(w) for w in signals)
        if len(sig) < 2:
            raise ValidationError("a news technology needs at least two signals")
        if sig[0] <= 0 or sig[-1] > 1 or any(b <= a for a, b in zip(sig, sig[1:])):
            raise ValidationError("signals must be strictly increasing in (0, 1]")
        self.signals = sig
        self._row_fn = row_fn
        self.label = label

    @property
    def k(self) -> int:
        return len(self.signals)

    def pmf(self, a: float) -> np.ndarray:
        """Signal distribution when candidate beta's policy is ``a``."""
        row = np.asarray(self._row_fn(float(a)), dtype=float)
        if row.shape != (self.k,):
            raise ValidationError("technology row has the wrong length")
        return row

    def pmf_matrix(self, a_values) -> np.ndarray:
        return np.stack([self.pmf(a) for a in a_values])

    def audit_rows(self, a_values, warn_zero: bool = True) -> list[str]:
        """Hard violations of the pmf invariants; zero entries only warn."""
        problems = []
        zero_at = []
        for a in a_values:
            row = self.pmf(a)
            if np.any(row < 0):
                problems.append(f"negative signal probability at policy {a}")
            if abs(float(row.sum()) - 1.0) > EXACT:
                problems.append(f"signal probabilities at policy {a} do not sum to 1")
            if np.any(row == 0):
                zero_at.append(a)
        if zero_at and warn_zero:
            warnings.warn(
                f"technology {self.label!r} lacks full support at "
                f"{len(zero_at)} policies (first: {zero_at[0]})",
                stacklevel=2,
            )
        return problems

    def garbled(self, kernel: MarkovKernel) -> NewsTechnology:
        """Post-compose with a per-candidate kernel; the result is a garble of
        this technology by construction."""
        if kernel.order != self.k:
            raise ValidationError("kernel order does not match the signal grid")
        base = self._row_fn
        matrix = kernel.matrix
        return NewsTechnology(
            self.signals,
            lambda a: np.asarray(base(a), dtype=float) @ matrix,
            label=f"{self.label}+garbled",
        )

    @staticmethod
    def slant(xi: float, signals=(0.25, 0.75)) -> NewsTechnology:
        """Two-signal slanting family: the extreme report comes with
        probability a + xi*(1-a); larger xi means noisier, more slanted news."""
        if not 0.0 < xi < 1.0:
            raise ValidationError("slant parameter must lie in (0, 1)")

        def row(a: float) -> np.ndarray:
            extreme = a + xi * (1.0 - a)
            return np.array([1.0 - extreme, extreme])

        return NewsTechnology(signals, row, label=f"slant(xi={xi})")

    @staticmethod
    def from_table(signals, policies, rows) -> NewsTechnology:
        pol = tuple(float(a) for a in policies)
        table = np.array(rows, dtype=float)
        if table.shape != (len(pol), len(signals)):
            raise ValidationError("technology table shape does not match its grids")

        def row(a: float) -> np.ndarray:
            for i, p in enumerate(pol):
                if abs(p - a) <= EXACT:
                    return table[i]
            raise KeyError(f"policy {a!r} is not on the technology's grid")

        return NewsTechnology(signals, row, label="table")

    @staticmethod
    def revealing(policies) -> NewsTechnology:
        """Fully revealing technology: the signal grid is the policy grid and
        each policy maps to its own signal with probability one."""
        pol = tuple(float(a) for a in policies)
        eye = np.eye(len(pol))

        def row(a: float) -> np.ndarray:
            for i, p in enumerate(pol):
                if abs(p - a) <= EXACT:
                    return eye[i]
            raise KeyError(f"policy {a!r} is not on the technology's grid")

        return NewsTechnology(pol, row, label="revealing")


def garble(tech: NewsTechnology, kernel: MarkovKernel) -> NewsTechnology:
    """f'(w'|a) = sum_w f(w|a) * kernel(w'|w), per candidate."""
    return tech.garbled(kernel)


def is_monotone_revealing(tech: NewsTechnology, a_values) -> bool:
    """Whether every policy maps to exactly one signal, in increasing order.

    Such a technology is the noiseless limit: the ratio-ordering audit is
    vacuous (zero cells everywhere) and the noisy game collapses to the
    baseline one.
    """
    rows = tech.pmf_matrix(a_values)
    if not np.all(np.isin(rows, (0.0, 1.0))):
        return False
    if not np.all(rows.sum(axis=1) == 1.0):
        return False
    hits = np.argmax(rows, axis=1)
    return bool(np.all(np.diff(hits) > 0))


# ---------------------------------------------------------------------------
# Log-supermodularity audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogSupermodularityReport:
    ok: bool
    violation: tuple | None = None       # (a, a', w, w') with a<a', w<w'
    indeterminate: tuple | None = None   # first compared cell with zero mass

    def describe(self) -> str:
        if self.ok:
            return "log-supermodular on the audited grid"
        if self.indeterminate is not None:
            a, w = self.indeterminate
            return f"indeterminate: zero probability at policy {a}, signal {w}"
        a, a2, w, w2 = self.violation
        return f"ratio ordering fails for policies ({a}, {a2}) and signals ({w}, {w2})"


def check_log_supermodularity(tech: NewsTechnology, a_values) -> LogSupermodularityReport:
    """Strict positivity of every 2x2 minor of log f on the policy grid."""
    a = tuple(float(x) for x in a_values)
    rows = tech.pmf_matrix(a)
    for (i, i2), (m, m2) in itertools.product(
        itertools.combinations(range(len(a)), 2),
        itertools.combinations(range(tech.k), 2),
    ):
        cells = rows[[i, i, i2, i2], [m, m2, m, m2]]
        if np.any(cells <= 0):
            bad = [(i, m), (i, m2), (i2, m), (i2, m2)][int(np.argmax(cells <= 0))]
            return LogSupermodularityReport(
                False, indeterminate=(a[bad[0]], tech.signals[bad[1]])
            )
        minor = (
            math.log(rows[i, m])
            + math.log(rows[i2, m2])
            - math.log(rows[i, m2])
            - math.log(rows[i2, m])
        )
        if minor <= EXACT:
            return LogSupermodularityReport(
                False, violation=(a[i], a[i2], tech.signals[m], tech.signals[m2])
            )
    return LogSupermodularityReport(True)


# ---------------------------------------------------------------------------
# Posteriors and attention over news profiles
# ---------------------------------------------------------------------------

def signal_marginal(tech: NewsTechnology, levels, sigma) -> np.ndarray:
    """P(signal profile (m, n)) induced by the policy matrix (levels, sigma)."""
    f = tech.pmf_matrix(levels)
    return f.T @ np.asarray(sigma, dtype=float) @ f


def posterior_value_matrix(
    tech: NewsTechnology, spec: UtilitySpec, levels, sigma, t: float
) -> tuple[np.ndarray, np.ndarray]:
    """(P, nu): signal-profile marginal and the posterior differential utility.

    nu[m, n] is the expected differential utility of choosing beta given the
    news profile (-w_m, w_n); cells with zero marginal probability are NaN.
    """
    levels = tuple(float(a) for a in levels)
    sigma = np.asarray(sigma, dtype=float)
    f = tech.pmf_matrix(levels)
    v = value_matrix(spec, levels, t)
    marginal = f.T @ sigma @ f
    k = tech.k
    nu = np.full((k, k), np.nan)
    for m in range(k):
        for n in range(k):
            if marginal[m, n] <= 0:
                continue
            weights = sigma * np.outer(f[:, m], f[:, n])
            nu[m, n] = float(np.sum((weights / marginal[m, n]) * v))
    return marginal, nu


def posterior_value(
    tech: NewsTechnology, spec: UtilitySpec, levels, sigma, m: int, n: int, t: float
) -> float:
    """Posterior differential utility at the news profile (-w_m, w_n)."""
    marginal, nu = posterior_value_matrix(tech, spec, levels, sigma, t)
    if marginal[m, n] <= 0:
        raise ValidationError(
            f"news profile ({-tech.signals[m]}, {tech.signals[n]}) has zero "
            "probability; its posterior is undefined"
        )
    return float(nu[m, n])


def signal_belief(
    tech: NewsTechnology, spec: UtilitySpec, levels, sigma, t: float
) -> BeliefOverProfiles:
    """Belief over news profiles with posterior differential values.

    Zero-probability profiles are dropped from the support with a warning.
    """
    marginal, nu = posterior_value_matrix(tech, spec, levels, sigma, t)
    k = tech.k
    support = []
    probs = []
    values = []
    dropped = 0
    for m in range(k):
        for n in range(k):
            if marginal[m, n] <= 0:
                dropped += 1
                continue
            support.append((-tech.signals[m], tech.signals[n]))
            probs.append(marginal[m, n])
            values.append(nu[m, n])
    if dropped:
        warnings.warn(
            f"dropped {dropped} zero-probability news profiles from the "
            "attention support",
            stacklevel=2,
        )
    return BeliefOverProfiles(tuple(support), np.array(probs), np.array(values))


def solve_attention_noisy(
    tech: NewsTechnology, spec: UtilitySpec, levels, sigma, t: float, mu: float
) -> AttentionSolution:
    """Optimal attention over news profiles; same contract as the baseline
    solver with posterior values in place of the raw differentials."""
    return solve_attention(signal_belief(tech, spec, levels, sigma, t), mu)


def attention_member_noisy(
    tech: NewsTechnology, spec: UtilitySpec, levels, sigma, t: float, mu: float
) -> bool:
    belief = signal_belief(tech, spec, levels, sigma, t)
    return float(log_mean_exp(belief.values, belief.probs, mu)) >= -EXACT


def attention_frontier_noisy(
    tech: NewsTechnology,
    spec: UtilitySpec,
    a1_grid,
    a2_grid,
    t: float,
    mu: float,
    level_probs=(0.5, 0.5),
) -> np.ndarray:
    """Noisy-news counterpart of the two-level attention frontier scan."""
    p = np.asarray(level_probs, dtype=float)
    out = np.full((len(a1_grid), 2), np.nan)
    for i, a1 in enumerate(np.asarray(a1_grid, dtype=float)):
        out[i, 0] = a1
        for a2 in np.asarray(a2_grid, dtype=float):
            if a2 <= a1 + EXACT:
                continue
            if attention_member_noisy(tech, spec, (a1, a2), np.outer(p, p), t, mu):
                out[i, 1] = a2
                break
    return out


# ---------------------------------------------------------------------------
# Noisy equilibrium enumeration
# ---------------------------------------------------------------------------

def downsian_signal_matrix(k: int) -> np.ndarray:
    """Winner as if news were fully revealing: the more centrist report wins,
    equal reports split.  Entry (m, n) is beta's winning probability."""
    w = np.zeros((k, k))
    w[np.tril_indices(k, -1)] = 1.0
    np.fill_diagonal(w, 0.5)
    return w


def expected_winning_matrix(tech: NewsTechnology, a_values) -> np.ndarray:
    """G[i, j]: beta's winning probability when alpha plays -a_i and beta a_j,
    with the winner decided signal-wise by centrism."""
    rows = tech.pmf_matrix(a_values)
    return rows @ downsian_signal_matrix(tech.k) @ rows.T


def check_ic_noisy(
    scenario: Scenario, assignment: StrategyAssignment
) -> tuple[bool, dict]:
    """Incentive compatibility when winners are decided by news reports."""
    require_symmetric(scenario)
    tech = scenario.news
    if tech is None:
        raise ValidationError("scenario has no news technology")
    grid = scenario.beta_axis.values
    g = expected_winning_matrix(tech, grid)
    index = {a: i for i, a in enumerate(grid)}

    def w_beta(x, a):
        return float(g[index[-x], index[a]])

    beta, alpha = _two_sided_gaps(scenario, assignment, w_beta)
    gaps = {("beta", t): gap for t, gap in beta}
    gaps.update({("alpha", t): gap for t, gap in alpha})
    return min(gaps.values()) >= -TOL, gaps


def _noisy_beliefs(scenario: Scenario, assignment: StrategyAssignment):
    tech = scenario.news
    levels = assignment.levels
    sigma = assignment.sigma()
    return {
        t: signal_belief(tech, scenario.utility, levels, sigma, t)
        for t, _ in scenario.electorate.groups
    }


def enumerate_equilibria_noisy(
    scenario: Scenario,
    mu: float | None = None,
    max_assignments: int = 200_000,
) -> list[EquilibriumRecord]:
    """All pure symmetric equilibria under the scenario's news technology.

    Refuses technologies that fail the pmf or log-supermodularity audits.
    Attached attention solutions live on the news-profile support.
    """
    require_symmetric(scenario)
    tech = scenario.news
    if tech is None:
        raise ValidationError("scenario has no news technology")
    grid = scenario.beta_axis.values
    revealing = is_monotone_revealing(tech, grid)
    problems = tech.audit_rows(grid, warn_zero=not revealing)
    if problems:
        raise ValidationError("news technology rejected: " + "; ".join(problems))
    if not revealing:
        report = check_log_supermodularity(tech, grid)
        if not report.ok:
            raise ValidationError("news technology rejected: " + report.describe())

    n_types = len(scenario.beta_types.types)
    count = len(grid) ** n_types
    if count > max_assignments:
        raise ValidationError(
            f"{count} assignments exceed the cap {max_assignments}; "
            "raise max_assignments explicitly to search this grid"
        )
    g = expected_winning_matrix(tech, grid)
    index = {a: i for i, a in enumerate(grid)}

    def w_beta(x, a):
        return float(g[index[-x], index[a]])

    records = []
    for policies in itertools.product(grid, repeat=n_types):
        assignment = assignment_for(scenario, policies)
        beta, alpha = _two_sided_gaps(scenario, assignment, w_beta)
        gaps = dict(beta)
        if min(min(gaps.values()), min(gap for _, gap in alpha)) < -TOL:
            continue
        levels = assignment.levels
        idx = [index[a] for a in levels]
        records.append(
            build_record(
                scenario,
                assignment,
                tuple(beta),
                mu,
                kind="noisy",
                expected_w=g[np.ix_(idx, idx)],
                beliefs=_noisy_beliefs(scenario, assignment),
            )
        )
    return records
