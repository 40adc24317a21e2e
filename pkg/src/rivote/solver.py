"""Single-voter attention problem with a mutual-information cost.

The voter chooses, state by state, the probability of picking candidate beta.
The optimum is either a corner (ignore politics, vote deterministically) or an
interior shifted-logit rule whose average probability solves a one-dimensional
monotone fixed point.  All exponential moments are evaluated with max-shifted
exponentials so small attention costs cannot overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import logsumexp

from .core import EXACT, NumericError, ValidationError

Regime = Literal["corner_zero", "corner_one", "interior"]

_MBAR_FLOOR = 1e-12
_MAX_BISECT = 200


def entropy(probs) -> float:
    """Shannon entropy in nats, with 0*log(0) = 0."""
    p = np.asarray(probs, dtype=float)
    if np.any(p < 0):
        raise ValidationError("probabilities must be nonnegative")
    nz = p[p > 0]
    return float(-np.dot(nz, np.log(nz)))


def binary_entropy(m) -> np.ndarray | float:
    """Entropy of a Bernoulli(m) decision, elementwise, in nats."""
    m = np.asarray(m, dtype=float)
    out = np.zeros_like(m)
    inner = (m > 0) & (m < 1)
    mi = m[inner]
    out[inner] = -(mi * np.log(mi) + (1.0 - mi) * np.log1p(-mi))
    return float(out) if out.ndim == 0 else out


def mutual_information(m, probs) -> float:
    """Mutual information (nats) between the state and a binary decision.

    ``m`` gives the per-state probability of the beta decision, ``probs`` the
    state distribution; equals H(state) minus the mean posterior entropy, but
    is computed on the decision side: H(mean m) - E[H(m)].
    """
    m = np.asarray(m, dtype=float)
    p = np.asarray(probs, dtype=float)
    m_bar = float(np.dot(p, m))
    value = binary_entropy(m_bar) - float(np.dot(p, binary_entropy(m)))
    # exact arithmetic gives value >= 0; rounding can dip a few ulp below
    return max(value, 0.0)


@dataclass(frozen=True)
class BeliefOverProfiles:
    """A finite belief over profiles together with the voter's payoff gains.

    ``values[k]`` is the differential utility of choosing beta at support
    point ``support[k]``; ``probs`` must be strictly positive and sum to one.
    """

    support: tuple
    probs: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        probs = np.array(self.probs, dtype=float)
        values = np.array(self.values, dtype=float)
        probs.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "values", values)
        n = len(self.support)
        if probs.shape != (n,) or values.shape != (n,):
            raise ValidationError("support, probs and values must have equal length")
        if len(set(self.support)) != n:
            raise ValidationError("support points must be distinct")
        if np.any(probs <= 0):
            raise ValidationError("support probabilities must be positive")
        if abs(float(probs.sum()) - 1.0) > EXACT:
            raise ValidationError("support probabilities must sum to 1")


@dataclass(frozen=True)
class AttentionSolution:
    """Optimal attention strategy for one voter under one belief."""

    regime: Regime
    m_bar: float                 # average probability of choosing beta
    likelihood_ratio: float      # m_bar / (1 - m_bar); inf at the upper corner
    m: np.ndarray                # per-support-point choice probabilities
    info: float                  # mutual information spent, in nats
    residual: float              # fixed-point residual |E[m]/m_bar - 1|

    def __post_init__(self) -> None:
        m = np.array(self.m, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def objective(self, belief: BeliefOverProfiles, mu: float) -> float:
        """Expected gain net of the attention cost, E[m*v] - mu*I."""
        return float(np.dot(belief.probs, self.m * belief.values)) - mu * self.info


def log_mean_exp(values, probs, mu: float):
    """log E[exp(values / mu)], max-shifted; broadcasts over leading axes."""
    x = np.asarray(values, dtype=float) / mu
    if not np.all(np.isfinite(x)):
        raise NumericError("non-finite scaled payoffs in exponential moment")
    return logsumexp(x, axis=-1, b=np.asarray(probs, dtype=float))


def _choice_probs(x: np.ndarray, m_bar: float) -> np.ndarray:
    """Shifted-logit rule m(x) = m_bar e^x / (m_bar e^x + 1 - m_bar), stably."""
    out = np.empty_like(x)
    pos = x >= 0
    e = np.exp(-x[pos])
    out[pos] = m_bar / (m_bar + (1.0 - m_bar) * e)
    e = np.exp(x[~pos])
    out[~pos] = m_bar * e / (m_bar * e + 1.0 - m_bar)
    return out


def _foc(x: np.ndarray, probs: np.ndarray, m_bar: float) -> float:
    """E[(e^x - 1) / (m_bar e^x + 1 - m_bar)]: strictly decreasing in m_bar."""
    terms = np.empty_like(x)
    pos = x >= 0
    e = np.exp(-x[pos])
    terms[pos] = (1.0 - e) / (m_bar + (1.0 - m_bar) * e)
    e = np.exp(x[~pos])
    terms[~pos] = (e - 1.0) / (m_bar * e + 1.0 - m_bar)
    return float(np.dot(probs, terms))


def solve_attention(belief: BeliefOverProfiles, mu: float) -> AttentionSolution:
    """Optimal attention strategy under ``belief`` at marginal cost ``mu``.

    Corner regimes are detected from the exponential-moment inequalities; the
    interior average probability is found by bisection on the first-order
    condition, which is strictly decreasing in the average.
    """
    if not mu > 0:
        raise ValidationError("mu must be positive")
    x = belief.values / mu
    if not np.all(np.isfinite(x)):
        raise NumericError("values/mu are not finite; rescale the problem")
    probs = belief.probs
    n = len(belief.support)

    log_e_pos = float(logsumexp(x, b=probs))
    log_e_neg = float(logsumexp(-x, b=probs))
    if log_e_pos < 0.0:  # E[exp(v/mu)] < 1: never choose beta
        return AttentionSolution("corner_zero", 0.0, 0.0, np.zeros(n), 0.0, 0.0)
    if log_e_neg < 0.0:  # E[exp(-v/mu)] < 1: always choose beta
        return AttentionSolution("corner_one", 1.0, math.inf, np.ones(n), 0.0, 0.0)

    lo, hi = _MBAR_FLOOR, 1.0 - _MBAR_FLOOR
    f_lo = _foc(x, probs, lo)
    f_hi = _foc(x, probs, hi)
    if f_lo <= 0.0:
        m_bar = lo
    elif f_hi >= 0.0:
        m_bar = hi
    else:
        for _ in range(_MAX_BISECT):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _foc(x, probs, mid) > 0.0:
                lo = mid
            else:
                hi = mid
        m_bar = 0.5 * (lo + hi)

    m = _choice_probs(x, m_bar)
    residual = abs(float(np.dot(probs, m)) / m_bar - 1.0)
    return AttentionSolution(
        "interior",
        m_bar,
        m_bar / (1.0 - m_bar),
        m,
        mutual_information(m, probs),
        residual,
    )


def attention_membership(belief: BeliefOverProfiles, mu: float) -> bool:
    """Whether the voter pays attention: E[exp(v/mu)] >= 1, up to 1e-12."""
    if not mu > 0:
        raise ValidationError("mu must be positive")
    return float(log_mean_exp(belief.values, belief.probs, mu)) >= -EXACT


def gamma(x: float) -> float:
    """Two-sided exponential exp(x) + exp(-x); >= 2 with equality at 0."""
    return math.exp(x) + math.exp(-x)


def gamma_inverse(y: float) -> float:
    """Unique nonnegative root of gamma(x) = y, i.e. log(y/2 + sqrt(y^2/4 - 1))."""
    if y < 2.0 - EXACT:
        raise ValidationError("gamma_inverse requires y >= 2")
    if y <= 2.0:
        return 0.0
    return math.acosh(0.5 * y)


def attention_threshold_delta(mu: float, t: float, kappa: float, diag_mass: float) -> float:
    """Minimal median-utility spread needed for voter t to possibly pay attention.

    ``diag_mass`` is the probability of the tying (diagonal) profiles; the
    bound is mu * gamma_inverse(2b) with
    b = (exp(kappa|t|/mu) - diag_mass) / (1 - diag_mass).
    """
    if not mu > 0 or not kappa > 0:
        raise ValidationError("mu and kappa must be positive")
    if not 0.0 <= diag_mass < 1.0:
        raise ValidationError("diag_mass must lie in [0, 1)")
    arg = kappa * abs(t) / mu
    if arg > 500.0:  # b ~ exp(arg): acosh(b) = log(2b) to double precision
        return mu * (math.log(2.0) + arg - math.log1p(-diag_mass))
    b = (math.exp(arg) - diag_mass) / (1.0 - diag_mass)
    return mu * gamma_inverse(2.0 * b)
