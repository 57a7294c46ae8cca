"""Learning agents: UCBVI with pluggable bonuses and the MVP baseline."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bonuses import BonusConfig, bonus_table
from .mdp import TabularMDP, greedy_policy
from .stats import VisitCounts


@dataclass
class OptimisticValues:
    Q: np.ndarray  # (H, S, A)
    V: np.ndarray  # (H+1, S), V[H] == 0


def initial_values(S: int, A: int, H: int) -> OptimisticValues:
    """Q_0 at 0-based stage h is the remaining horizon H - h."""
    remaining = (H - np.arange(H, dtype=np.float64))[:, None, None]
    Q = np.broadcast_to(remaining, (H, S, A)).copy()
    V = np.zeros((H + 1, S))
    V[:H] = Q.max(axis=2)
    return OptimisticValues(Q=Q, V=V)


def optimistic_backup(
    R: np.ndarray,
    p_hat: np.ndarray,
    q_prev: np.ndarray,
    bonus_fn: Callable[[int, np.ndarray, np.ndarray], np.ndarray],
    cap: float | None = None,
) -> OptimisticValues:
    """One pass of clipped optimistic backward induction.

    ``Q_h = min(q_prev_h, R + p_hat @ V_{h+1} + bonus_fn(h, V_{h+1}, p_hat @ V_{h+1}))``,
    optionally also capped at ``cap``.
    """
    H, S, _ = q_prev.shape
    Q = np.empty_like(q_prev)
    V = np.zeros((H + 1, S))
    for h in range(H - 1, -1, -1):
        ev = p_hat @ V[h + 1]
        cand = R + ev + bonus_fn(h, V[h + 1], ev)
        if cap is not None:
            np.minimum(cand, cap, out=cand)
        np.minimum(q_prev[h], cand, out=Q[h])
        V[h] = Q[h].max(axis=1)
    return OptimisticValues(Q=Q, V=V)


def sample_next_state(mdp: TabularMDP, x: int, a: int, u: float) -> int:
    """Inverse-CDF draw of the next state from a uniform ``u`` in [0, 1)."""
    y = int(np.searchsorted(mdp.cdf[x, a], u, side="right"))
    return min(y, mdp.S - 1)


class _TabularAgent:
    name = "agent"

    def __init__(self, S: int, A: int, H: int, R: np.ndarray):
        self.S, self.A, self.H = S, A, H
        self.R = np.asarray(R, dtype=np.float64)
        if self.R.shape != (S, A):
            raise ValueError(f"reward table must have shape {(S, A)}")
        self.counts = VisitCounts(S, A, H)
        self.values = initial_values(S, A, H)
        self.episode_index = 0

    def plan(self) -> OptimisticValues:
        raise NotImplementedError

    def act(self, x: int, h: int) -> int:
        return int(np.argmax(self.values.Q[h, x]))

    def policy(self) -> np.ndarray:
        return greedy_policy(self.values.Q)

    def observe(self, x: int, a: int, y: int, h: int) -> None:
        self.counts.update(x, a, y, h)

    def run_episode(self, env: TabularMDP, rng: np.random.Generator) -> tuple[float, np.ndarray]:
        """Plan, then roll out one episode on the true MDP.

        Returns the realized return and the greedy policy that was followed.
        """
        self.plan()
        policy = self.policy()
        us = rng.random(self.H)
        x = env.initial_state
        ret = 0.0
        for h in range(self.H):
            a = int(policy[h, x])
            ret += env.R[x, a]
            y = sample_next_state(env, x, a, us[h])
            self.observe(x, a, y, h)
            x = y
        self.episode_index += 1
        return ret, policy


class UCBVIAgent(_TabularAgent):
    """UCBVI: optimistic value iteration clipped by the previous episode's Q."""

    def __init__(self, S: int, A: int, H: int, R: np.ndarray, bonus_cfg: BonusConfig):
        super().__init__(S, A, H, R)
        self.bonus_cfg = bonus_cfg
        self.name = f"ucbvi-{bonus_cfg.variant}"

    def bonus(self, h: int, v_next: np.ndarray, ev: np.ndarray, p_hat: np.ndarray) -> np.ndarray:
        return bonus_table(self.bonus_cfg, self.counts, p_hat, v_next, h, ev=ev)

    def plan(self) -> OptimisticValues:
        p_hat = self.counts.transition_table()
        self.values = optimistic_backup(
            self.R, p_hat, self.values.Q, lambda h, v, ev: self.bonus(h, v, ev, p_hat)
        )
        return self.values


def mvp_log_term(H: int, S: int, A: int, K: int, delta: float) -> float:
    """ln(1/delta') with delta' = delta / (200 S A H^2 K^2)."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    return math.log(200.0 * S * A * H**2 * K**2 / delta)


MVP_C1 = 460.0 / 9.0
MVP_C3 = 544.0 / 9.0


class MVPAgent(_TabularAgent):
    """Monotonic Value Propagation with stage-merged counts and no reward term.

    The model of a pair is refreshed, and the whole Q table replanned, only
    when its visit count reaches 1, 2, 4, 8, ...
    """

    name = "mvp"

    def __init__(self, S: int, A: int, H: int, R: np.ndarray, *, K: int, delta: float,
                 c1: float = MVP_C1, c3: float = MVP_C3):
        super().__init__(S, A, H, R)
        self.c1, self.c3 = float(c1), float(c3)
        self.c2 = 0.0  # reward-uncertainty coefficient; rewards are known
        self.iota = mvp_log_term(H, S, A, K, delta)
        self.next_trigger = np.ones((S, A), dtype=np.int64)
        self.n_frozen = np.zeros((S, A), dtype=np.int64)
        self.p_frozen = np.zeros((S, A, S))
        self.values = OptimisticValues(Q=np.full((H, S, A), float(H)), V=np.zeros((H + 1, S)))
        self.values.V[:H] = H
        self.replans = 0
        self._stale = True

    def observe(self, x: int, a: int, y: int, h: int) -> None:
        super().observe(x, a, y, h)
        n = self.counts.n_sa[x, a]
        if n == self.next_trigger[x, a]:
            self.n_frozen[x, a] = n
            self.p_frozen[x, a] = self.counts.n_say[x, a] / n
            self.next_trigger[x, a] *= 2
            self._stale = True

    def bonus(self, v_next: np.ndarray, ev: np.ndarray) -> np.ndarray:
        n1 = np.maximum(self.n_frozen, 1)
        var = np.maximum(self.p_frozen @ (v_next * v_next) - ev * ev, 0.0)
        return (self.c1 * np.sqrt(var * self.iota / n1)
                + self.c3 * self.H * self.iota / n1)

    def plan(self) -> OptimisticValues:
        if not self._stale:
            return self.values
        self.values = optimistic_backup(
            self.R, self.p_frozen, self.values.Q, lambda h, v, ev: self.bonus(v, ev), cap=float(self.H)
        )
        self.replans += 1
        self._stale = False
        return self.values
