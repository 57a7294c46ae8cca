import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from ucbvi_lab import cli
from ucbvi_lab.bounds import ratio_report, theorem1_bound, theorem2_bound
from ucbvi_lab.config import ConfigError, ExperimentConfig, parse_config
from ucbvi_lab.environments import EnvSpec, make_rng, random_mdp
from ucbvi_lab.harness import (
    CellError,
    RegretTrace,
    aggregate,
    build_env,
    instantaneous_regret,
    logged_episodes,
    run_cell,
    run_experiment,
)
from ucbvi_lab.mdp import TabularMDP, evaluate_policy, exact_value_iteration, load_mdp
from ucbvi_lab.outputs import emit_outputs, read_trace_csv

SMALL = """
# tiny smoke experiment
env.kind = random
env.S = 3
env.A = 2
env.H = 3
env.seed = 4
agents = bf-refined, ch-original, mvp
K = 60
runs = 3
master_seed = 11
delta = 0.1
regret_eval_stride = 7
"""


@pytest.fixture
def small_cfg():
    return parse_config(SMALL)


# -- regret ----------------------------------------------------------------------------


def test_regret_of_optimal_policy_is_zero():
    env = random_mdp(4, 3, 5, seed=1)
    vstar, pi = exact_value_iteration(env)
    assert abs(instantaneous_regret(env, vstar, pi)) <= 1e-12


def test_regret_range():
    env = random_mdp(4, 3, 5, seed=2)
    vstar, _ = exact_value_iteration(env)
    rng = np.random.default_rng(0)
    for _ in range(50):
        r = instantaneous_regret(env, vstar, rng.integers(0, 3, size=(5, 4)))
        assert -1e-12 <= r <= 5


def test_regret_hand_example():
    # state 0: action 0 stays (reward 0.2), action 1 jumps to state 1 (reward 0); state 1 pays 1 forever
    P = np.zeros((2, 2, 2))
    P[0, 0, 0] = 1.0
    P[0, 1, 1] = 1.0
    P[1, :, 1] = 1.0
    R = np.array([[0.2, 0.0], [1.0, 1.0]])
    env = TabularMDP(P=P, R=R, H=3)
    vstar, _ = exact_value_iteration(env)
    assert vstar.V[0, 0] == pytest.approx(2.0)
    lazy = np.zeros((3, 2), dtype=int)
    assert instantaneous_regret(env, vstar, lazy) == pytest.approx(2.0 - 0.6, abs=1e-12)


def test_regret_matches_monte_carlo_rollouts():
    cfg = ExperimentConfig(env=EnvSpec("random", S=3, A=3, H=5, seed=3), agents=["bf-refined"], K=200, runs=1)
    env = build_env(cfg, 0)
    policies = {}

    def grab(agent, k):
        if k in (1, 10, 50, 120, 200):
            policies[k] = agent.policy()

    run_cell(cfg, "bf-refined", 0, callback=grab)
    rng = make_rng(5)
    n = 10_000
    for k, pi in policies.items():
        exact = evaluate_policy(env, pi).V[0, env.initial_state]
        x = np.zeros(n, dtype=int)
        ret = np.zeros(n)
        for h in range(env.H):
            a = pi[h, x]
            ret += env.R[x, a]
            u = rng.random(n)
            x = np.minimum((env.cdf[x, a] <= u[:, None]).sum(axis=1), env.S - 1)
        se = ret.std(ddof=1) / math.sqrt(n)
        assert abs(ret.mean() - exact) <= 3 * se + 1e-12, k


# -- experiments -----------------------------------------------------------------------


def test_logged_episodes():
    np.testing.assert_array_equal(logged_episodes(10, 1), np.arange(1, 11))
    np.testing.assert_array_equal(logged_episodes(10, 4), [4, 8, 10])
    np.testing.assert_array_equal(logged_episodes(3, 5), [3])


def test_traces_are_well_formed(small_cfg):
    res = run_experiment(small_cfg)
    assert len(res.traces) == 9
    for t in res.traces:
        assert np.all(t.instant_regret >= -1e-9)
        assert np.all(np.diff(t.cum_regret) >= -1e-9)
        assert t.cum_regret[-1] <= small_cfg.K * small_cfg.env.H
        np.testing.assert_array_equal(t.episodes, logged_episodes(60, 7))


def test_stride_one_is_exact():
    cfg = ExperimentConfig(env=EnvSpec("random", S=3, A=2, H=3, seed=0), agents=["bf-original"], K=40, runs=1)
    env = build_env(cfg, 0)
    vstar, _ = exact_value_iteration(env)
    expected = []
    trace = run_cell(cfg, "bf-original", 0, callback=lambda agent, k: expected.append(
        vstar.V[0, 0] - evaluate_policy(env, agent.policy()).V[0, 0]))
    np.testing.assert_allclose(trace.instant_regret, expected, atol=1e-12)
    np.testing.assert_allclose(trace.cum_regret, np.cumsum(expected), atol=1e-11)


def test_same_seed_same_results(small_cfg):
    a, b = run_experiment(small_cfg), run_experiment(small_cfg)
    for ta, tb in zip(a.traces, b.traces):
        assert np.array_equal(ta.cum_regret, tb.cum_regret)


def test_random_env_resampled_per_run_riverswim_fixed(small_cfg):
    assert not np.array_equal(build_env(small_cfg, 0).P, build_env(small_cfg, 1).P)
    rs = ExperimentConfig(env=EnvSpec("riverswim", S=4, A=2, H=6), agents=["mvp"], K=5, runs=2)
    assert np.array_equal(build_env(rs, 0).P, build_env(rs, 1).P)


def test_single_run_has_zero_width_ci():
    cfg = ExperimentConfig(env=EnvSpec("random", S=2, A=2, H=2), agents=["ch-refined"], K=20, runs=1)
    s = run_experiment(cfg).summary["ch-refined"]
    np.testing.assert_array_equal(s.ci_low, s.mean)
    np.testing.assert_array_equal(s.ci_high, s.mean)


def test_identical_traces_aggregate_to_themselves():
    eps = np.arange(1, 6)
    cum = np.array([0.5, 0.9, 1.2, 1.2, 1.4])
    traces = [RegretTrace("x", r, eps, np.diff(cum, prepend=0), cum) for r in range(4)]
    s = aggregate(traces, ["x"])["x"]
    np.testing.assert_array_equal(s.mean, cum)
    np.testing.assert_allclose(s.ci_high - s.ci_low, 0.0, atol=1e-15)


def test_ci_is_normal_approximation():
    eps = np.array([1])
    traces = [RegretTrace("x", r, eps, np.array([v]), np.array([v])) for r, v in enumerate([1.0, 2.0, 3.0, 6.0])]
    s = aggregate(traces, ["x"])["x"]
    half = 1.96 * np.std([1, 2, 3, 6], ddof=1) / 2
    assert s.mean[0] == 3.0
    assert s.ci_high[0] - 3.0 == pytest.approx(half, rel=1e-12)


def test_failing_cell_aborts(small_cfg, monkeypatch):
    import ucbvi_lab.harness as harness

    def boom(agent, env, cfg):
        raise RuntimeError("kaput")

    monkeypatch.setattr(harness, "make_agent", boom)
    with pytest.raises(CellError, match="agent=bf-refined, run=0"):
        run_experiment(small_cfg)


# -- outputs ---------------------------------------------------------------------------


def test_emit_outputs(tmp_path, small_cfg):
    res = run_experiment(small_cfg)
    emit_outputs(res, tmp_path)
    names = sorted(p.name for p in tmp_path.iterdir())
    assert "summary.csv" in names and "regret.svg" in names and "meta.txt" in names
    assert "trace_mvp_2.csv" in names
    for t in res.traces:
        path = tmp_path / f"trace_{t.agent}_{t.run}.csv"
        lines = path.read_text().splitlines()
        assert lines[0] == "episode,instant_regret,cum_regret"
        assert len(lines) - 1 == 60 // 7 + 1
        back = read_trace_csv(path)
        assert np.array_equal(back.episodes, t.episodes)
        assert np.array_equal(back.instant_regret, t.instant_regret)
        assert np.array_equal(back.cum_regret, t.cum_regret)
    summary = (tmp_path / "summary.csv").read_text().splitlines()
    assert summary[0] == "episode,agent,mean_cum_regret,ci_low,ci_high"
    assert len(summary) == 1 + 3 * 9
    root = ET.parse(tmp_path / "regret.svg").getroot()
    assert root.tag.endswith("svg")
    meta = (tmp_path / "meta.txt").read_text()
    assert "rng_algorithm = numpy.random.PCG64" in meta and "master_seed = 11" in meta


def test_emit_rejects_unwritable(tmp_path, small_cfg):
    res = run_experiment(small_cfg)
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OSError):
        emit_outputs(res, blocker / "sub")


# -- config ----------------------------------------------------------------------------


def test_config_roundtrip(small_cfg):
    assert small_cfg.agents == ["bf-refined", "ch-original", "mvp"]
    assert small_cfg.T == 180
    again = parse_config(small_cfg.to_text())
    assert again.to_text() == small_cfg.to_text()


def test_config_riverswim_defaults():
    cfg = parse_config("env.kind = riverswim\nenv.S = 5\nenv.H = 10\nagents = mvp\nK = 5\n"
                       "env.left_reward = 0.2\n")
    assert cfg.env.A == 2 and cfg.runs == 10 and cfg.delta == 0.05
    assert build_env(cfg, 0).R[0, 0] == 0.2


@pytest.mark.parametrize("text", [
    "env.kind = random\nenv.S = 3\nenv.A = 2\nenv.H = 3\nagents = bf-refined\n",  # missing K
    "env.kind = random\nenv.S = 3\nenv.A = 2\nenv.H = 3\nagents = ucb\nK = 5\n",
    "env.kind = random\nenv.S = 3\nenv.A = 2\nenv.H = 3\nagents = mvp\nK = five\n",
    "env.kind = random\nenv.S = 3\nenv.A = 2\nenv.H = 3\nagents = mvp\nK = 5\ncolour = red\n",
    "env.kind = random\nenv.S = 3\nenv.A = 2\nenv.H = 3\nagents = mvp\nK = 5\ndelta = 1.5\n",
    "env.kind = riverswim\nenv.S = 3\nenv.A = 3\nenv.H = 3\nagents = mvp\nK = 5\n",
    "env.kind = random\nenv.S = 3\nnonsense line\n",
])
def test_bad_config_rejected(text):
    with pytest.raises(ConfigError):
        parse_config(text)


# -- bounds ----------------------------------------------------------------------------


def test_theorem_bounds_frozen_values():
    # 40-digit mpmath evaluations of the closed forms
    assert theorem1_bound(5, 3, 3, 5 * 10**5, 0.05) == pytest.approx(8477628.6436084350206, rel=1e-12)
    assert theorem2_bound(10, 5, 2, 10 * 10**5, 0.05) == pytest.approx(4454455943.6887302210, rel=1e-12)


def test_bounds_increase_in_T_and_stay_positive():
    for f in (theorem1_bound, theorem2_bound):
        vals = [f(5, 3, 3, T, 0.05) for T in (1, 10, 100, 10**4, 10**6)]
        assert all(v > 0 for v in vals)
        assert all(a < b for a, b in zip(vals, vals[1:]))
        with pytest.raises(ValueError):
            f(5, 3, 3, 100, 1.0)


def test_dominant_term_ratios_against_original():
    H, S, A, T, d = 5, 3, 3, 10**6, 0.05
    r = ratio_report(H, S, A, T, d)
    L = r.values["L"]
    assert 20 * math.e * H * L * math.sqrt(S * A * T) / r.values["theorem1_dominant"] == pytest.approx(2, abs=1e-12)
    assert 30 * math.e * L * math.sqrt(H * S * A * T) / r.values["theorem2_dominant"] == pytest.approx(1.25,
                                                                                                       abs=1e-12)


def test_ratio_report():
    r = ratio_report()
    assert r.rows() == [("CH", 3.5, 2.0), ("BF", math.sqrt(2), 1.25)]
    assert r.ch_lower_order_ratio == pytest.approx(93.75)
    assert r.bf_lower_order_ratio == pytest.approx(2500 / 616)
    for dims in [(2, 2, 2, 10, 0.5), (10, 5, 2, 10**7, 0.001)]:
        assert ratio_report(*dims).rows() == r.rows()


# -- CLI -------------------------------------------------------------------------------


def test_cli_make_env(tmp_path, capsys):
    out = tmp_path / "r.tabmdp"
    assert cli.main(["make-env", "random", "--S", "3", "--A", "2", "--H", "4", "--seed", "9", "--out", str(out)]) == 0
    assert np.array_equal(load_mdp(out).P, random_mdp(3, 2, 4, 9).P)
    out2 = tmp_path / "rs.tabmdp"
    assert cli.main(["make-env", "riverswim", "--S", "5", "--H", "10", "--out", str(out2)]) == 0
    assert load_mdp(out2).A == 2
    assert cli.main(["make-env", "riverswim", "--S", "1", "--H", "10", "--out", str(out2)]) == 2


def test_cli_bounds(capsys):
    assert cli.main(["bounds", "--H", "5", "--S", "3", "--A", "3", "--K", "100000", "--delta", "0.05",
                     "--table"]) == 0
    out = capsys.readouterr().out
    assert "theorem1" in out and "theorem2" in out and "1.41421" in out
    assert cli.main(["bounds", "--H", "5", "--S", "3", "--A", "3", "--K", "10", "--delta", "2"]) == 2


def test_cli_run_and_parallel_determinism(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(SMALL)
    assert cli.main(["run", "--config", str(cfg), "--out", str(tmp_path / "p1")]) == 0
    assert cli.main(["run", "--config", str(cfg), "--parallel", "3", "--out", str(tmp_path / "p3")]) == 0
    for f in sorted((tmp_path / "p1").glob("*.csv")):
        assert f.read_bytes() == (tmp_path / "p3" / f.name).read_bytes()
    assert cli.main(["run", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_cli_validate(capsys):
    assert cli.main(["validate", "--dump-counts"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("[PASS]") >= 7
    assert "N' 0" in out
