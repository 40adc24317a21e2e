import json

import numpy as np
import pytest

from rivote.cli import main
from rivote.presets import figure2_scenario, figure3_scenario, table1_scenario
from rivote.scenario_io import dump_scenario, load_scenario, scenario_hash


@pytest.fixture()
def fig2_path(tmp_path):
    path = tmp_path / "fig2.json"
    dump_scenario(figure2_scenario(), path)
    return str(path)


@pytest.fixture()
def fig3_path(tmp_path):
    path = tmp_path / "fig3.json"
    dump_scenario(figure3_scenario(0.75), path)
    return str(path)


def read_rows(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# rivote ")
    assert "scenario_hash=" in lines[1] and "seed=" in lines[1]
    header = lines[2].split(",")
    return header, [line.split(",") for line in lines[3:]]


class TestValidate:
    def test_good_scenario(self, fig2_path, capsys):
        assert main(["validate", "--scenario", fig2_path]) == 0
        assert "scenario ok" in capsys.readouterr().out

    def test_schema_violations_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({
            "schema_version": 1,
            "policies": {"beta": [0.4, 0.1]},
            "utility": {"family": "nosuch"},
            "candidates": {"beta": [[0.3, 0.7]]},
            "electorate": {"groups": [[0.0, 1.0]]},
            "attention": {"mu": -1},
        }))
        assert main(["validate", "--scenario", str(bad)]) == 2
        err = capsys.readouterr().err
        assert "policies" in err or "attention.mu" in err or "utility" in err

    def test_missing_section_exit_2(self, tmp_path):
        bad = tmp_path / "bad2.json"
        bad.write_text(json.dumps({"schema_version": 1}))
        assert main(["validate", "--scenario", str(bad)]) == 2

    def test_not_json_exit_2(self, tmp_path):
        bad = tmp_path / "bad3.json"
        bad.write_text("not json {")
        assert main(["validate", "--scenario", str(bad)]) == 2


class TestSolveAttention:
    def test_matches_library(self, fig2_path, tmp_path):
        out = tmp_path / "o"
        assert main([
            "solve-attention", "--scenario", fig2_path,
            "--policies", "0.01,0.4", "--out", str(out),
        ]) == 0
        header, rows = read_rows(out / "solve_attention.csv")
        assert header[:5] == ["t", "regime", "m_bar", "likelihood_ratio", "info"]

        from rivote.election import assignment_for, profile_belief
        from rivote.solver import solve_attention

        scenario = load_scenario(fig2_path)
        a = assignment_for(scenario, (0.01, 0.4))
        for row in rows:
            t = float(row[0])
            sol = solve_attention(
                profile_belief(scenario.utility, a.levels, a.sigma(), t), scenario.mu
            )
            assert row[1] == sol.regime
            assert float(row[2]) == sol.m_bar
            np.testing.assert_array_equal([float(x) for x in row[5:]], sol.m)

    def test_wrong_policy_count_exit_2(self, fig2_path, tmp_path):
        assert main([
            "solve-attention", "--scenario", fig2_path,
            "--policies", "0.01", "--out", str(tmp_path / "o"),
        ]) == 2


class TestEnumerate:
    def test_benchmark_rows(self, fig2_path, tmp_path):
        out = tmp_path / "o"
        assert main(["enumerate", "--scenario", fig2_path, "--out", str(out)]) == 0
        _, rows = read_rows(out / "equilibria.csv")
        assert [r[3] for r in rows] == ["0.01|0.2", "0.01|0.4"]
        assert all(r[1] == "baseline" for r in rows)

    def test_noisy_pipeline_used_with_news(self, fig3_path, tmp_path):
        out = tmp_path / "o"
        assert main(["enumerate", "--scenario", fig3_path, "--out", str(out)]) == 0
        _, rows = read_rows(out / "equilibria.csv")
        assert rows and all(r[1] == "noisy" for r in rows)


class TestAttentionSet:
    def test_frontier_csv(self, fig2_path, tmp_path):
        out = tmp_path / "o"
        assert main([
            "attention-set", "--scenario", fig2_path, "--t", "-0.001",
            "--a1", "0.05:0.3:0.05", "--a2", "0.05:1.0:0.05", "--out", str(out),
        ]) == 0
        header, rows = read_rows(out / "attention_set.csv")
        assert header == ["a1", "a2"]
        gaps = [float(a2) - float(a1) for a1, a2 in rows]
        assert all(g >= 0.28 for g in gaps)  # the mu=10 hurdle is ~.283


class TestGarble:
    def test_slant_shift(self, fig3_path, tmp_path, capsys):
        out = tmp_path / "o"
        assert main([
            "garble", "--scenario", fig3_path, "--lam", "0.4", "--out", str(out),
        ]) == 0
        assert "log-supermodular" in capsys.readouterr().out
        header, rows = read_rows(out / "garbled_news.csv")
        xi2 = 0.75 + 0.4 * 0.25  # shifting the slant family stays in family
        for row in rows:
            a = float(row[0])
            assert float(row[2]) == pytest.approx(a + xi2 * (1 - a), abs=1e-12)

    def test_needs_news_section(self, fig2_path, tmp_path):
        assert main([
            "garble", "--scenario", fig2_path, "--lam", "0.4",
            "--out", str(tmp_path / "o"),
        ]) == 2


class TestSweep:
    def test_mu_sweep_monotone_attention(self, fig2_path, tmp_path):
        out = tmp_path / "o"
        assert main([
            "sweep", "--scenario", fig2_path, "--param", "mu",
            "--values", "0.1,1,10,40", "--t", "-0.001", "--out", str(out),
        ]) == 0
        _, rows = read_rows(out / "sweep.csv")
        ea = [float(r[4]) for r in rows if r[2] == "ea_size"]
        assert len(ea) == 4
        assert ea == sorted(ea, reverse=True)
        n_eq = {float(r[4]) for r in rows if r[2] == "n_equilibria"}
        assert n_eq == {2.0}

    def test_eta_sweep_runs(self, fig2_path, tmp_path):
        out = tmp_path / "o"
        assert main([
            "sweep", "--scenario", fig2_path, "--param", "eta",
            "--values", "0.5,1.0", "--out", str(out),
        ]) == 0
        _, rows = read_rows(out / "sweep.csv")
        assert any(r[2] == "equilibrium" for r in rows)

    def test_threads_do_not_change_bytes(self, fig2_path, tmp_path):
        args = ["sweep", "--scenario", fig2_path, "--param", "mu",
                "--values", "0.5,5,50", "--t", "-0.001"]
        assert main(args + ["--out", str(tmp_path / "a"), "--threads", "1"]) == 0
        assert main(args + ["--out", str(tmp_path / "b"), "--threads", "3"]) == 0
        assert (tmp_path / "a/sweep.csv").read_bytes() == (tmp_path / "b/sweep.csv").read_bytes()


class TestReproduce:
    @pytest.mark.parametrize("target", ["table1", "table2"])
    def test_tables(self, target, tmp_path):
        assert main(["reproduce", target, "--out", str(tmp_path)]) == 0
        assert (tmp_path / f"{target}.csv").exists()

    def test_figure2(self, tmp_path):
        assert main(["reproduce", "figure2", "--out", str(tmp_path)]) == 0
        _, rows = read_rows(tmp_path / "figure2.csv")
        diamonds = {(float(r[1]), float(r[2])) for r in rows if r[0] == "equilibrium"}
        assert diamonds == {(0.01, 0.2), (0.01, 0.4)}

    def test_tight_tolerance_exits_4(self, tmp_path):
        assert main([
            "reproduce", "table1", "--out", str(tmp_path), "--tolerance", "1e-9",
        ]) == 4

    def test_byte_identical_reruns(self, tmp_path):
        assert main(["reproduce", "table1", "--out", str(tmp_path / "a")]) == 0
        assert main(["reproduce", "table1", "--out", str(tmp_path / "b")]) == 0
        assert (tmp_path / "a/table1.csv").read_bytes() == (tmp_path / "b/table1.csv").read_bytes()


def test_scenario_hash_stable():
    assert scenario_hash(table1_scenario()) == scenario_hash(table1_scenario())
    assert scenario_hash(table1_scenario()) != scenario_hash(figure2_scenario())
