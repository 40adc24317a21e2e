import math

import numpy as np
import pytest

from rivote.core import SymmetryError, UtilitySpec, ValidationError
from rivote.election import (
    MatrixTriple,
    aggregate_and_rationalize,
    assignment_for,
    attention_frontier,
    attention_member,
    check_ic,
    downsian_matrix,
    downsian_winner,
    enumerate_equilibria,
    median_differential,
    perfect_observation_winner,
    profile_belief,
    truncation_statistic,
    value_matrix,
)
from rivote.presets import build, figure2_scenario
from rivote.solver import attention_threshold_delta, log_mean_exp, solve_attention


class TestDownsianWinner:
    def test_center_closer_beta_wins(self, abs_spec):
        assert downsian_winner(abs_spec, -0.4, 0.01) == 1.0

    def test_equidistant_split(self, abs_spec):
        assert downsian_winner(abs_spec, -0.3, 0.3) == 0.5

    def test_center_closer_alpha_wins(self, abs_spec):
        assert downsian_winner(abs_spec, -0.01, 0.4) == 0.0


class TestMatrixTriple:
    def test_invariants_enforced(self):
        with pytest.raises(ValidationError):
            MatrixTriple((0.2, 0.1), np.full((2, 2), 0.25), np.eye(2))
        with pytest.raises(ValidationError):
            MatrixTriple((0.1, 0.2), np.array([[0.5, 0.3], [0.1, 0.1]]), np.eye(2))
        with pytest.raises(ValidationError):
            MatrixTriple((0.1, 0.2), np.full((2, 2), 0.25), np.full((2, 2), 0.3))

    @pytest.mark.parametrize("family", ["absolute", "quadratic"])
    def test_median_value_structure(self, family):
        # scaled median differentials: antisymmetric, positive below the
        # diagonal, maximised at the widest profile
        rng = np.random.default_rng(7)
        spec = UtilitySpec(family=family)
        for _ in range(20):
            n = int(rng.integers(2, 6))
            a = np.sort(rng.uniform(0.01, 1.0, n))
            while np.any(np.diff(a) < 1e-4):
                a = np.sort(rng.uniform(0.01, 1.0, n))
            delta = value_matrix(spec, a, 0.0)
            assert np.max(np.abs(delta + delta.T)) <= 1e-12
            lower = np.tril_indices(n, -1)
            assert np.all(delta[lower] > 0)
            assert np.argmax(delta) == np.ravel_multi_index((n - 1, 0), (n, n))


class TestAggregation:
    def test_off_diagonal_profile_beta_wins(self, figure2):
        # moderate-vs-centrist profile: the more centrist candidate wins
        assignment = assignment_for(figure2, (0.01, 0.4))
        w = aggregate_and_rationalize(figure2, assignment, mu=0.09)
        assert w[1, 0] == 1.0 and w[0, 1] == 0.0

    def test_diagonal_profiles_split(self, figure2):
        assignment = assignment_for(figure2, (0.01, 0.4))
        w = aggregate_and_rationalize(figure2, assignment, mu=0.09)
        assert w[0, 0] == 0.5 and w[1, 1] == 0.5

    def test_recovers_perfect_observation_matrix(self, table1):
        assignment = assignment_for(table1, (0.01, 0.4))
        w = aggregate_and_rationalize(table1, assignment)
        np.testing.assert_array_equal(w, downsian_matrix(table1.utility, (0.01, 0.4)))

    def test_group_sum_identity(self, table1):
        # symmetric voters jointly favour the candidate closer to the center
        assignment = assignment_for(table1, (0.01, 0.4))
        levels, sigma = assignment.levels, assignment.sigma()
        sols = {
            t: solve_attention(profile_belief(table1.utility, levels, sigma, t), table1.mu)
            for t, _ in table1.electorate.groups
        }
        n = len(levels)
        for t in (0.05, 0.2):
            m_pos = sols[t].m.reshape(n, n)
            m_neg = sols[-t].m.reshape(n, n)
            for i in range(n):
                for j in range(i):
                    assert m_pos[i, j] + m_neg[i, j] >= 1.0 - 1e-9

    def test_voter_symmetry_of_solutions(self, table1):
        assignment = assignment_for(table1, (0.01, 0.4))
        levels, sigma = assignment.levels, assignment.sigma()
        for t in (0.05, 0.2):
            pos = solve_attention(profile_belief(table1.utility, levels, sigma, t), table1.mu)
            neg = solve_attention(profile_belief(table1.utility, levels, sigma, -t), table1.mu)
            assert pos.m_bar + neg.m_bar == pytest.approx(1.0, abs=1e-9)

    def test_asymmetric_scenario_refused(self, figure2):
        import dataclasses

        lopsided = dataclasses.replace(
            figure2,
            electorate=type(figure2.electorate)(((-0.2, 0.7), (0.2, 0.3))),
        )
        with pytest.raises(SymmetryError):
            aggregate_and_rationalize(lopsided, assignment_for(lopsided, (0.01, 0.4)))

    def test_off_path_rule(self, figure2):
        # perfect observation: strict preference decides, zero value abstains to alpha
        assert perfect_observation_winner(figure2, -0.4, 0.01) == 1.0
        assert perfect_observation_winner(figure2, -0.01, 0.4) == 0.0


class TestIncentiveCompatibility:
    def test_benchmark_moderate_assignment(self, figure2):
        ok, gaps = check_ic(figure2, assignment_for(figure2, (0.01, 0.2)))
        assert ok
        assert min(gaps.values()) >= 0

    def test_benchmark_extreme_assignment(self, figure2):
        ok, _ = check_ic(figure2, assignment_for(figure2, (0.01, 0.4)))
        assert ok

    def test_pooling_fails_with_stronger_winner_preference(self, figure2):
        ok, gaps = check_ic(figure2, assignment_for(figure2, (0.01, 0.01)))
        assert not ok
        assert min(gaps.values()) < 0

    def test_pure_office_motivation_converges(self):
        doc = figure2_scenario()
        doc["utility"].update({"win_weight": 0.0, "lose_weight": 0.0})
        scenario = build(doc)
        assert check_ic(scenario, assignment_for(scenario, (0.01, 0.01)))[0]
        for policies in ((0.01, 0.2), (0.2, 0.2), (0.01, 0.4)):
            assert not check_ic(scenario, assignment_for(scenario, policies))[0]

    def test_equal_weights_converge(self):
        doc = figure2_scenario()
        doc["utility"].update({"win_weight": 6.0, "lose_weight": 6.0})
        scenario = build(doc)
        records = enumerate_equilibria(scenario)
        assert [r.assignment.policies for r in records] == [(0.01, 0.01)]

    def test_huge_winner_weight_creates_profitable_centrist_deviation(self):
        doc = figure2_scenario()
        doc["utility"]["win_weight"] = 100.0
        scenario = build(doc)
        ok, gaps = check_ic(scenario, assignment_for(scenario, (0.01, 0.4)))
        assert not ok
        assert gaps[("beta", 0.3)] < 0

    def test_rationalized_source_agrees_on_benchmark(self, figure2):
        for policies in ((0.01, 0.2), (0.01, 0.4)):
            a = assignment_for(figure2, policies)
            ok_d, gaps_d = check_ic(figure2, a, w_source="downsian")
            ok_r, gaps_r = check_ic(figure2, a, w_source="rationalized", mu=0.09)
            assert ok_d == ok_r
            for key in gaps_d:
                assert gaps_d[key] == pytest.approx(gaps_r[key], abs=1e-9)


class TestEnumeration:
    def test_benchmark_set(self, figure2):
        records = enumerate_equilibria(figure2, verify_rationalizable=True)
        assert [r.assignment.policies for r in records] == [(0.01, 0.2), (0.01, 0.4)]

    def test_invariant_to_attention_cost(self, figure2):
        baseline = {r.assignment.policies for r in enumerate_equilibria(figure2)}
        for mu in (0.1, 1.0, 10.0, 100.0):
            assert {
                r.assignment.policies for r in enumerate_equilibria(figure2, mu=mu)
            } == baseline

    def test_cap_refusal(self, figure2):
        with pytest.raises(ValidationError):
            enumerate_equilibria(figure2, max_assignments=3)

    def test_records_sorted_and_diagnosed(self, figure2):
        records = enumerate_equilibria(figure2)
        policies = [r.assignment.policies for r in records]
        assert policies == sorted(policies)
        for r in records:
            assert r.min_gap >= -1e-9
            assert dict(r.attentive)[0.0]  # the median group always attends


class TestAttentionSet:
    def test_cheap_attention_admits_everything(self, abs_spec):
        sigma = np.full((2, 2), 0.25)
        assert attention_member(abs_spec, (0.1, 0.4), sigma, -0.05, 1e-3)

    def test_costly_attention_empties_the_set(self, abs_spec):
        sigma = np.full((2, 2), 0.25)
        for a in ((0.1, 0.4), (0.01, 0.99)):
            assert not attention_member(abs_spec, a, sigma, -0.05, 1e4)

    def test_membership_monotone_in_mu(self, abs_spec):
        sigma = np.full((2, 2), 0.25)
        mus = np.geomspace(0.01, 100, 25)
        flags = [attention_member(abs_spec, (0.05, 0.45), sigma, -0.01, m) for m in mus]
        assert flags == sorted(flags, reverse=True)

    def test_frontier_dominates_closed_form(self, abs_spec):
        mu, tau = 10.0, 0.001
        bound = mu * math.acosh(2 * math.exp(2 * tau / mu) - 1)
        grid = np.arange(0.01, 0.7, 0.01)
        a2_grid = np.arange(0.01, 1.0 + 0.005, 0.01)
        frontier = attention_frontier(abs_spec, grid, a2_grid, -tau, mu)
        found = frontier[~np.isnan(frontier[:, 1])]
        assert len(found) > 10
        gaps = found[:, 1] - found[:, 0]
        assert np.all(gaps >= bound - 1e-12)
        # the scan only overshoots by grid resolution
        assert np.all(gaps <= bound + 0.01 + 1e-12)

    def test_frontier_matches_threshold_delta(self, abs_spec):
        # same boundary through the closed form with the effective constants
        mu, tau = 10.0, 0.001
        delta = attention_threshold_delta(mu, tau, 2.0, 0.5)
        assert delta == pytest.approx(mu * math.acosh(2 * math.exp(2 * tau / mu) - 1), abs=1e-12)


class TestTruncation:
    def test_cheap_attention_keeps_both(self, figure2):
        records = enumerate_equilibria(figure2)
        kept, diff = truncation_statistic(figure2, records, -0.001, mu=0.1)
        assert len(kept) == 2
        assert diff == pytest.approx(median_differential(figure2.utility, (0.01, 0.2)))

    def test_intermediate_cost_truncates(self, figure2):
        records = enumerate_equilibria(figure2)
        kept, diff = truncation_statistic(figure2, records, -0.001, mu=10.0)
        assert [r.assignment.policies for r in kept] == [(0.01, 0.4)]
        assert diff == pytest.approx(0.39)

    def test_prohibitive_cost_empties(self, figure2):
        records = enumerate_equilibria(figure2)
        kept, diff = truncation_statistic(figure2, records, -0.001, mu=1e4)
        assert kept == () and diff is None

    def test_nested_and_monotone_in_mu(self, figure2):
        records = enumerate_equilibria(figure2)
        mus = np.geomspace(0.05, 200.0, 30)
        prev = None
        prev_diff = -math.inf
        for mu in mus:
            kept, diff = truncation_statistic(figure2, records, -0.001, mu=mu)
            keys = {r.assignment.policies for r in kept}
            if prev is not None:
                assert keys <= prev
            if diff is not None:
                assert diff >= prev_diff - 1e-12
                prev_diff = diff
            prev = keys


def test_median_moment_strict_on_random_symmetric_matrices(abs_spec):
    # non-degenerate symmetric distributions always leave the median strictly
    # willing to pay attention
    rng = np.random.default_rng(99)
    for _ in range(50):
        n = int(rng.integers(2, 5))
        a = tuple(0.01 + np.cumsum(rng.uniform(0.02, 0.2, n)))  # stays inside (0, 1)
        s = rng.uniform(0.05, 1.0, (n, n))
        sigma = s + s.T
        sigma /= sigma.sum()
        mu = float(rng.uniform(0.05, 5.0))
        belief = profile_belief(abs_spec, a, sigma, 0.0)
        assert float(log_mean_exp(belief.values, belief.probs, mu)) > 0.0
