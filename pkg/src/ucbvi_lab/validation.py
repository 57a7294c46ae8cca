"""Fast self-checks of the core invariants, used by the ``validate`` command."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .agents import MVPAgent, UCBVIAgent
from .bonuses import VARIANTS, BonusConfig
from .bounds import ratio_report
from .environments import make_rng, random_mdp, riverswim
from .mdp import (
    all_deterministic_policies,
    dumps_mdp,
    evaluate_policy,
    exact_value_iteration,
    loads_mdp,
)
from .stats import bernstein_bernoulli_bound


def _vi_matches_enumeration() -> str:
    for seed in range(5):
        mdp = random_mdp(2, 2, 3, seed)
        vstar, _ = exact_value_iteration(mdp)
        best = np.max([evaluate_policy(mdp, pi).V[0] for pi in all_deterministic_policies(2, 2, 3)], axis=0)
        assert np.max(np.abs(best - vstar.V[0])) <= 1e-10
    return "5 MDPs, 64 policies each"


def _bernstein_coverage() -> str:
    p, n, delta = 0.3, 50, 0.05
    rng = make_rng(0)
    p_hat = rng.binomial(n, p, size=4000) / n
    cover = float(np.mean(np.abs(p_hat - p) <= bernstein_bernoulli_bound(p, n, delta)))
    assert cover >= 1 - delta, cover
    return f"coverage {cover:.4f}"


def _monotone_and_consistent() -> str:
    env = random_mdp(3, 3, 4, 7)
    rng = make_rng(1)
    for variant in VARIANTS:
        agent = UCBVIAgent(3, 3, 4, env.R, BonusConfig.from_variant(variant, delta=0.05, H=4, S=3, A=3, T=800))
        prev = agent.values.Q.copy()
        for _ in range(200):
            agent.run_episode(env, rng)
            assert np.all(agent.values.Q <= prev)
            prev = agent.values.Q.copy()
        agent.counts.validate()
    return "4 variants x 200 episodes"


def _optimism() -> str:
    env = random_mdp(3, 3, 4, 11)
    vstar, _ = exact_value_iteration(env)
    rng = make_rng(2)
    agent = UCBVIAgent(3, 3, 4, env.R, BonusConfig.from_variant("bf-refined", delta=0.05, H=4, S=3, A=3, T=1200))
    for _ in range(300):
        agent.run_episode(env, rng)
        assert np.all(agent.values.V >= vstar.V - 1e-9)
    return "bf-refined, 300 episodes"


def _mvp_doubling() -> str:
    env = riverswim(3, 4)
    agent = MVPAgent(3, 2, 4, env.R, K=100, delta=0.05)
    rng = make_rng(3)
    for _ in range(100):
        agent.run_episode(env, rng)
    n = agent.n_frozen[agent.n_frozen > 0]
    assert np.all((n & (n - 1)) == 0), "frozen counts must be powers of two"
    return f"{agent.replans} replans in 100 episodes"


def _table_ratios() -> str:
    r = ratio_report()
    assert abs(r.ch_bonus_ratio - 3.5) <= 1e-12 and abs(r.ch_regret_ratio - 2) <= 1e-12
    assert abs(r.bf_bonus_ratio - math.sqrt(2)) <= 1e-12 and abs(r.bf_regret_ratio - 1.25) <= 1e-12
    return "7/2, 2, sqrt(2), 5/4"


def _serialization_roundtrip() -> str:
    mdp = random_mdp(4, 3, 6, 5)
    back = loads_mdp(dumps_mdp(mdp))
    assert np.array_equal(back.P, mdp.P) and np.array_equal(back.R, mdp.R)
    return "bit-identical"


CHECKS: list[tuple[str, Callable[[], str]]] = [
    ("value iteration == policy enumeration", _vi_matches_enumeration),
    ("bernstein bernoulli coverage", _bernstein_coverage),
    ("monotone Q and counter consistency", _monotone_and_consistent),
    ("optimism of bf-refined", _optimism),
    ("mvp doubling schedule", _mvp_doubling),
    ("improvement ratio table", _table_ratios),
    ("tabmdp round trip", _serialization_roundtrip),
]


def run_checks() -> list[tuple[str, bool, str]]:
    results = []
    for name, check in CHECKS:
        try:
            results.append((name, True, check()))
        except AssertionError as exc:
            results.append((name, False, f"assertion failed {exc}"))
    return results


def diagnostic_counts(episodes: int = 50, seed: int = 0) -> str:
    """Counter dump of a short bf-refined run on a small random MDP."""
    env = random_mdp(3, 2, 3, seed)
    agent = UCBVIAgent(3, 2, 3, env.R, BonusConfig.from_variant("bf-refined", delta=0.05, H=3, S=3, A=2,
                                                                T=3 * episodes))
    rng = make_rng(seed)
    for _ in range(episodes):
        agent.run_episode(env, rng)
    return agent.counts.dump()
