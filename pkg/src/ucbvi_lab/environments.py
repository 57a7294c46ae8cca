"""Benchmark environments: seeded random MDPs and RiverSwim."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mdp import TabularMDP

RNG_ALGORITHM = "numpy.random.PCG64"

# Default RiverSwim parameters. ``left_reward`` was tuned so that, with S=5 and
# H=10, Q*(0, swim) - Q*(0, turn back) at the first stage is about 0.11.
RIVERSWIM_DEFAULTS = {
    "forward_success_prob": 0.35,
    "backward_slip_prob": 0.05,
    "left_reward": 0.11,
    "right_reward": 1.0,
}


def make_rng(seed) -> np.random.Generator:
    """The single generator type used across the package (PCG64)."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(int(seed)))


def random_mdp(S: int, A: int, H: int, seed: int) -> TabularMDP:
    """Random MDP with flat-Dirichlet transition rows and U[0, 1] rewards.

    Rows are normalized standard exponentials. Starts in state 0.
    """
    if min(S, A, H) < 1:
        raise ValueError("S, A and H must all be >= 1")
    rng = make_rng(seed)
    E = rng.standard_exponential((S, A, S))
    P = E / E.sum(axis=2, keepdims=True)
    R = rng.random((S, A))
    return TabularMDP(P=P, R=R, H=H, initial_state=0)


def riverswim(
    S: int,
    H: int,
    *,
    forward_success_prob: float = RIVERSWIM_DEFAULTS["forward_success_prob"],
    backward_slip_prob: float = RIVERSWIM_DEFAULTS["backward_slip_prob"],
    left_reward: float = RIVERSWIM_DEFAULTS["left_reward"],
    right_reward: float = RIVERSWIM_DEFAULTS["right_reward"],
) -> TabularMDP:
    """RiverSwim chain. Action 0 turns back (deterministic), action 1 swims.

    Swimming advances w.p. ``forward_success_prob``, slips back w.p.
    ``backward_slip_prob`` and otherwise stays; moves off either end of the
    chain are folded into staying put.
    """
    if S < 2:
        raise ValueError("riverswim needs S >= 2")
    fwd, back = float(forward_success_prob), float(backward_slip_prob)
    if not (0 <= fwd <= 1 and 0 <= back <= 1 and fwd + back <= 1):
        raise ValueError("swim probabilities must be in [0, 1] and sum to at most 1")
    for r in (left_reward, right_reward):
        if not 0 <= r <= 1:
            raise ValueError("rewards must lie in [0, 1]")
    stay = 1.0 - fwd - back

    P = np.zeros((S, 2, S))
    R = np.zeros((S, 2))
    for x in range(S):
        P[x, 0, max(x - 1, 0)] = 1.0
        P[x, 1, x] += stay
        P[x, 1, min(x + 1, S - 1)] += fwd
        P[x, 1, max(x - 1, 0)] += back
    R[0, 0] = left_reward
    R[S - 1, 1] = right_reward
    return TabularMDP(P=P, R=R, H=H, initial_state=0)


@dataclass
class EnvSpec:
    kind: str  # "random" | "riverswim"
    S: int
    A: int = 2
    H: int = 1
    seed: int = 0
    riverswim_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("random", "riverswim"):
            raise ValueError(f"unknown environment kind {self.kind!r}")
        if self.kind == "riverswim" and self.A != 2:
            raise ValueError("riverswim requires A = 2")
        unknown = set(self.riverswim_params) - set(RIVERSWIM_DEFAULTS)
        if unknown:
            raise ValueError(f"unknown riverswim parameters: {sorted(unknown)}")

    def build(self, seed: int | None = None) -> TabularMDP:
        if self.kind == "random":
            return random_mdp(self.S, self.A, self.H, self.seed if seed is None else seed)
        return riverswim(self.S, self.H, **self.riverswim_params)
