import json
import os
import stat

import numpy as np
import pytest

import gainflow as gf
from gainflow.cli import read_trajectory_csv, run_cli, write_trajectory_csv
from gainflow.scenario import ScenarioError, bundled_scenario_path, parse_scenario

BASIC = """
seed = 7

[game]
spec = "good_rps:1:0.9"

[dynamic]
spec = "smith:1.0"

[run]
initial_state = [0.9, 0.05, 0.05]
dt = 0.01
horizon = 1.0

[[audit]]
kind = "monotonicity"
series = "G"
budget = "default"
expect = "monotone_up_to_transients"

[[audit]]
kind = "convergence"
target = "equilibrium"
radius = 1e-3
"""

REORDERED = """
seed = 7

[run]
horizon = 1.0
dt = 0.01
initial_state = [0.9, 0.05, 0.05]

[[audit]]
radius = 1e-3
kind = "convergence"
target = "equilibrium"

[[audit]]
expect = "monotone_up_to_transients"
kind = "monotonicity"
budget = "default"
series = "G"

[dynamic]
spec = "smith:1.0"

[game]
spec = "good_rps:1:0.9"
"""


def write(tmp_path, text, name="s.scenario"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


class TestParseScenario:
    def test_basic(self, tmp_path):
        sc = parse_scenario(write(tmp_path, BASIC))
        assert sc.game.name == "good_rps"
        assert sc.dynamic.kind == "rationalizable"
        assert sc.initial_state == (0.9, 0.05, 0.05)
        assert sc.config.horizon == 1.0 and sc.config.dt == 0.01
        assert sc.seed == 7
        kinds = [a.kind for a in sc.audits]
        assert kinds == ["monotonicity", "convergence"]

    def test_key_order_insensitive(self, tmp_path):
        a = parse_scenario(write(tmp_path, BASIC, "a.scenario"))
        b = parse_scenario(write(tmp_path, REORDERED, "b.scenario"))
        ta = gf.simulate(a.game, a.dynamic, a.initial_state, a.config, seed=a.seed)
        tb = gf.simulate(b.game, b.dynamic, b.initial_state, b.config, seed=b.seed)
        assert np.array_equal(ta.states, tb.states)
        assert np.array_equal(ta.series["G"], tb.series["G"])

    def test_all_errors_collected(self, tmp_path):
        text = """
[game]
spec = "good_rps"

[dynamic]
spec = "smith:1.0"

[run]
initial_state = [0.9, 0.05, 0.05, 0.0]
dt = -1.0
horizon = 1.0

[[audit]]
kind = "teleportation"
"""
        with pytest.raises(ScenarioError) as exc:
            parse_scenario(write(tmp_path, text))
        msgs = exc.value.errors
        assert any("initial_state" in m for m in msgs)
        assert any("dt" in m or "run:" in m for m in msgs)
        assert any("teleportation" in m for m in msgs)
        assert len(msgs) >= 3

    def test_dimension_error_names_initial_state(self, tmp_path):
        text = BASIC.replace("[0.9, 0.05, 0.05]", "[0.9, 0.05, 0.03, 0.02]")
        with pytest.raises(ScenarioError) as exc:
            parse_scenario(write(tmp_path, text))
        assert any("initial_state" in m for m in exc.value.errors)

    def test_unknown_keys_rejected(self, tmp_path):
        text = BASIC + "\n[output]\nbogus_key = 1\n"
        with pytest.raises(ScenarioError) as exc:
            parse_scenario(write(tmp_path, text))
        assert any("bogus_key" in m for m in exc.value.errors)
        with pytest.raises(ScenarioError):
            parse_scenario(write(tmp_path, BASIC + "\nwhatever = 2\n", "t.scenario"))

    def test_unknown_game_and_dynamic(self, tmp_path):
        text = BASIC.replace("good_rps:1:0.9", "tic_tac_toe")
        with pytest.raises(ScenarioError) as exc:
            parse_scenario(write(tmp_path, text))
        assert any(m.startswith("game:") for m in exc.value.errors)

    def test_env_seed_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("GAINFLOW_SEED", "99")
        sc = parse_scenario(write(tmp_path, BASIC))
        assert sc.seed == 99

    def test_bundled_scenarios_parse(self):
        for name in ("rps_smith", "rps_replicator", "rps_brd", "rps_bnn",
                     "friedman_smith"):
            sc = parse_scenario(bundled_scenario_path(name))
            assert sc.config.dt == 0.01
            assert sc.initial_state == (0.9, 0.05, 0.05)

    def test_rps_smith_setup(self):
        sc = parse_scenario(bundled_scenario_path("rps_smith"))
        assert sc.game.name == "good_rps" and sc.config.horizon == 200.0
        assert sc.dynamic.protocol.name == "smith"

    def test_rps_replicator_has_w_audit(self):
        sc = parse_scenario(bundled_scenario_path("rps_replicator"))
        assert any(a.series == "W" for a in sc.audits)
        assert sc.dynamic.kind == "replicator"


class TestCsvRoundTrip:
    def test_exact_round_trip(self, tmp_path):
        traj = gf.simulate(gf.good_rps(), gf.make_dynamic("smith:1.0", 3),
                           (0.9, 0.05, 0.05), gf.IntegratorConfig(horizon=2.0))
        path = str(tmp_path / "t.csv")
        write_trajectory_csv(traj, path)
        cols = read_trajectory_csv(path)
        assert np.array_equal(cols["t"], traj.times)
        for i in range(3):
            assert np.array_equal(cols[f"x{i + 1}"], traj.states[:, i])
            assert np.array_equal(cols[f"pi{i + 1}"], traj.payoffs[:, i])
        for name in ("G", "H", "Gamma", "nash_gap"):
            assert np.array_equal(cols[name], traj.series[name])

    def test_column_order(self, tmp_path):
        traj = gf.simulate(gf.good_rps(), gf.make_dynamic("smith:1.0", 3),
                           (0.9, 0.05, 0.05), gf.IntegratorConfig(horizon=0.1))
        path = str(tmp_path / "t.csv")
        write_trajectory_csv(traj, path)
        header = open(path).readline().strip().split(",")
        assert header == ["t", "x1", "x2", "x3", "pi1", "pi2", "pi3",
                          "G", "H", "Gamma", "nash_gap"]


class TestCli:
    def test_simulate_bundled(self, tmp_path, capsys):
        out = str(tmp_path / "traj.csv")
        sc = write(tmp_path, BASIC)
        assert run_cli(["simulate", "--scenario", sc, "--out", out]) == 0
        header = open(out).readline().strip().split(",")
        assert header[:1] == ["t"] and "G" in header

    def test_audit_pass(self, tmp_path):
        sc = write(tmp_path, BASIC.replace("radius = 1e-3", "radius = 0.9"))
        report = str(tmp_path / "rep.json")
        assert run_cli(["audit", "--scenario", sc, "--report", report]) == 0
        data = json.load(open(report))
        assert data["audits"] and all(a["passed"] for a in data["audits"])

    def test_audit_fail_exit_1(self, tmp_path):
        # a 1-second run cannot be within 1e-3 of equilibrium yet
        sc = write(tmp_path, BASIC)
        assert run_cli(["audit", "--scenario", sc]) == 1

    def test_check_protocol(self, capsys):
        assert run_cli(["check-protocol", "--spec", "smith", "--actions", "5"]) == 0
        assert run_cli(["check-protocol", "--spec", "fixture_i", "--actions", "5"]) == 1

    def test_check_game(self, capsys):
        assert run_cli(["check-game", "--spec", "good_rps"]) == 0
        assert run_cli(["check-game", "--spec", "bad_rps"]) == 1

    def test_properties(self, capsys):
        assert run_cli(["properties", "--spec", "smith", "--actions", "3",
                        "--trials", "30"]) == 0
        assert run_cli(["properties", "--spec", "fixture_i", "--actions", "5",
                        "--trials", "80"]) == 1

    def test_bad_flags_exit_2(self, capsys):
        assert run_cli(["simulate"]) == 2
        assert run_cli(["frobnicate"]) == 2

    def test_unwritable_output_exit_3(self, tmp_path, capsys):
        sc = write(tmp_path, BASIC)
        out = str(tmp_path / "no_such_dir" / "traj.csv")
        assert run_cli(["simulate", "--scenario", sc, "--out", out]) == 3

    def test_missing_scenario_exit_1(self, capsys):
        assert run_cli(["simulate", "--scenario", "no_such.scenario"]) == 1

    def test_sweep(self, tmp_path, capsys):
        a = write(tmp_path, BASIC, "a.scenario")
        b = write(tmp_path, BASIC.replace("radius = 1e-3", "radius = 0.9"),
                  "b.scenario")
        # one failing + one passing audit -> overall failure
        assert run_cli(["audit", "--scenario", a, b, "--sweep"]) == 1
        assert run_cli(["audit", "--scenario", b, b, "--sweep"]) == 0
