"""Exact-regret experiments: one cell per (agent, run), aggregated across runs."""
from __future__ import annotations

import logging
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .agents import MVPAgent, UCBVIAgent, _TabularAgent
from .bonuses import BonusConfig
from .config import ExperimentConfig
from .environments import make_rng
from .mdp import TabularMDP, ValueFunctions, exact_value_iteration, policy_value_at

log = logging.getLogger(__name__)

Z_95 = 1.96
_ENV_STREAM = 0x656E76  # distinguishes environment seeds from agent streams


class CellError(RuntimeError):
    def __init__(self, agent: str, run: int, cause: BaseException):
        super().__init__(f"cell (agent={agent}, run={run}) failed: {cause!r}")
        self.agent, self.run = agent, run


@dataclass
class RegretTrace:
    agent: str
    run: int
    episodes: np.ndarray  # logged 1-based episode indices
    instant_regret: np.ndarray
    cum_regret: np.ndarray


@dataclass
class AgentSummary:
    agent: str
    episodes: np.ndarray
    mean: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    traces: list[RegretTrace]
    summary: dict[str, AgentSummary]


def instantaneous_regret(env: TabularMDP, vstar: ValueFunctions, policy: np.ndarray) -> float:
    """V*_1(x_1) - V^pi_1(x_1), computed exactly."""
    return float(vstar.V[0, env.initial_state]) - policy_value_at(env, policy)


def cell_seed(master_seed: int, agent: str, run: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(master_seed), zlib.crc32(agent.encode()), int(run)])


def env_seed(base_seed: int, run: int) -> int:
    ss = np.random.SeedSequence([int(base_seed), _ENV_STREAM, int(run)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def build_env(cfg: ExperimentConfig, run: int) -> TabularMDP:
    """Random MDPs are redrawn for every run; RiverSwim is one fixed environment."""
    if cfg.env.kind == "random":
        return cfg.env.build(seed=env_seed(cfg.env.seed, run))
    return cfg.env.build()


def make_agent(agent: str, env: TabularMDP, cfg: ExperimentConfig) -> _TabularAgent:
    S, A, H = env.S, env.A, env.H
    if agent == "mvp":
        return MVPAgent(S, A, H, env.R, K=cfg.K, delta=cfg.delta, c1=cfg.mvp_c1)
    bonus = BonusConfig.from_variant(agent, delta=cfg.delta, H=H, S=S, A=A, T=cfg.K * H)
    return UCBVIAgent(S, A, H, env.R, bonus)


def logged_episodes(K: int, stride: int) -> np.ndarray:
    eps = np.arange(stride, K + 1, stride)
    if eps.size == 0 or eps[-1] != K:
        eps = np.append(eps, K)
    return eps


def run_cell(cfg: ExperimentConfig, agent: str, run: int,
             callback: Callable[[_TabularAgent, int], None] | None = None) -> RegretTrace:
    """Run K episodes for one (agent, run) cell.

    Regret is evaluated exactly on episode 1, every ``regret_eval_stride``-th
    episode and on episode K; in between the last value is carried forward.
    ``callback(agent, k)`` runs after each episode.
    """
    env = build_env(cfg, run)
    vstar, _ = exact_value_iteration(env)
    learner = make_agent(agent, env, cfg)
    rng = make_rng(cell_seed(cfg.master_seed, agent, run))
    stride = cfg.regret_eval_stride
    logged = logged_episodes(cfg.K, stride)
    inst = np.empty(logged.size)
    cum = np.empty(logged.size)
    i = 0
    total = 0.0
    last_policy = None
    regret = 0.0
    for k in range(1, cfg.K + 1):
        _, policy = learner.run_episode(env, rng)
        if k == 1 or k % stride == 0 or k == cfg.K:
            if last_policy is None or not np.array_equal(policy, last_policy):
                regret = instantaneous_regret(env, vstar, policy)
                last_policy = policy
        total += regret
        if k == logged[i]:
            inst[i], cum[i] = regret, total
            i += 1
        if callback is not None:
            callback(learner, k)
    return RegretTrace(agent=agent, run=run, episodes=logged, instant_regret=inst, cum_regret=cum)


def _run_cell_task(args) -> RegretTrace:
    cfg, agent, run = args
    try:
        return run_cell(cfg, agent, run)
    except Exception as exc:
        raise CellError(agent, run, exc) from exc


def aggregate(traces: list[RegretTrace], agents: list[str]) -> dict[str, AgentSummary]:
    """Mean cumulative regret with a normal-approximation 95% interval."""
    summary = {}
    for agent in agents:
        cells = [t for t in traces if t.agent == agent]
        if not cells:
            continue
        M = np.stack([t.cum_regret for t in cells])
        mean = M.mean(axis=0)
        if len(cells) > 1:
            half = Z_95 * M.std(axis=0, ddof=1) / np.sqrt(len(cells))
        else:
            half = np.zeros_like(mean)
        summary[agent] = AgentSummary(agent, cells[0].episodes, mean, mean - half, mean + half)
    return summary


def run_experiment(cfg: ExperimentConfig, parallel: int = 1) -> ExperimentResult:
    """Run every (agent, run) cell, serially or on a process pool.

    Results do not depend on ``parallel``: every cell owns its RNG stream.
    Any failing cell aborts the experiment with :class:`CellError`.
    """
    tasks = [(cfg, agent, run) for agent in cfg.agents for run in range(cfg.runs)]
    log.info("running %d cells (K=%d, parallel=%d)", len(tasks), cfg.K, parallel)
    if parallel <= 1:
        traces = [_run_cell_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            traces = list(pool.map(_run_cell_task, tasks))
    return ExperimentResult(config=cfg, traces=traces, summary=aggregate(traces, cfg.agents))
