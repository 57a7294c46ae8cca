"""Exploration bonuses for UCBVI: Chernoff-Hoeffding and Bernstein-Freedman.

Each family comes in a ``refined`` constant set and the ``original`` one it
improves on. Stages are 0-based, so the last stage is ``H - 1``; the bonus is
zero there because rewards are known and nothing remains to explore.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .stats import VisitCounts, empirical_next_value_variance, empirical_transition

CHERNOFF_HOEFFDING = "chernoff_hoeffding"
BERNSTEIN_FREEDMAN = "bernstein_freedman"

# Leading factor c in c*H*L/sqrt(n). The original value 7 is reconstructed
# from the published 7/2 bonus ratio against the refined 2.
CH_CONSTANTS = {"refined": 2.0, "original": 7.0}

# (variance term, 1/n term, next-stage term, factor inside the b' minimum)
BF_CONSTANTS = {
    "refined": (4.0, 7.0 / 3.0, 4.0, 84.0**2),
    "original": (8.0, 14.0 / 3.0, 8.0, 100.0**2),
}

VARIANTS = {
    "ch-refined": (CHERNOFF_HOEFFDING, "refined"),
    "ch-original": (CHERNOFF_HOEFFDING, "original"),
    "bf-refined": (BERNSTEIN_FREEDMAN, "refined"),
    "bf-original": (BERNSTEIN_FREEDMAN, "original"),
}


def log_term(H: int, S: int, A: int, T: int, delta: float) -> float:
    """L = ln(5 H S A T / delta)."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    if min(H, S, A, T) < 1:
        raise ValueError("H, S, A and T must all be >= 1")
    return math.log(5.0 * H * S * A * T / delta)


@dataclass
class BonusConfig:
    family: str
    constants: str
    delta: float
    H: int
    S: int
    A: int
    T: int
    L: float | None = None  # None: computed from the dimensions

    def __post_init__(self):
        if self.family not in (CHERNOFF_HOEFFDING, BERNSTEIN_FREEDMAN):
            raise ValueError(f"unknown bonus family {self.family!r}")
        if self.constants not in ("refined", "original"):
            raise ValueError(f"unknown constant set {self.constants!r}")
        if self.L is None:
            self.L = log_term(self.H, self.S, self.A, self.T, self.delta)

    @classmethod
    def from_variant(cls, variant: str, *, delta: float, H: int, S: int, A: int, T: int,
                     L: float | None = None) -> "BonusConfig":
        try:
            family, constants = VARIANTS[variant]
        except KeyError:
            raise ValueError(f"unknown bonus variant {variant!r}; expected one of {sorted(VARIANTS)}")
        return cls(family, constants, delta, H, S, A, T, L)

    @property
    def variant(self) -> str:
        prefix = "ch" if self.family == CHERNOFF_HOEFFDING else "bf"
        return f"{prefix}-{self.constants}"

    @property
    def ch_constant(self) -> float:
        return CH_CONSTANTS[self.constants]

    @property
    def bf_constants(self) -> tuple[float, float, float, float]:
        return BF_CONSTANTS[self.constants]

    @property
    def bprime_numerator(self) -> float:
        c4 = self.bf_constants[3]
        return c4 * self.H**3 * self.S**2 * self.A * self.L**2


def bonus_ch(n_sa: int, cfg: BonusConfig, h: int | None = None) -> float:
    """c*H*L / sqrt(max(n, 1)); zero at the last stage when ``h`` is given."""
    if h is not None and h == cfg.H - 1:
        return 0.0
    return cfg.ch_constant * cfg.H * cfg.L / math.sqrt(max(int(n_sa), 1))


def bprime(n_stage_state_y: int, cfg: BonusConfig) -> float:
    return min(cfg.bprime_numerator / max(1, int(n_stage_state_y)), float(cfg.H) ** 2)


def bf_terms(n: int, variance: float, p_row, n_next_stage, cfg: BonusConfig) -> tuple[float, float, float]:
    """The three Bernstein-Freedman summands (variance, 1/n, next-stage)."""
    c1, c2, c3, _ = cfg.bf_constants
    n = int(n)
    n1 = max(n, 1)
    term_a = math.sqrt(c1 * cfg.L * variance / n1)
    term_b = c2 * cfg.H * cfg.L / max(n - 1, 1)
    bp = np.array([bprime(m, cfg) for m in np.asarray(n_next_stage)])
    term_c = math.sqrt(c3 * float(np.asarray(p_row, dtype=float) @ bp) / n1)
    return term_a, term_b, term_c


def bonus_bf(counts: VisitCounts, v_next, x: int, a: int, h: int, cfg: BonusConfig) -> float:
    """Bernstein-Freedman bonus for one pair at 0-based stage ``h``."""
    if h == cfg.H - 1:
        return 0.0
    p_hat = empirical_transition(counts, x, a)
    var = empirical_next_value_variance(p_hat, v_next)
    return sum(bf_terms(counts.n_sa[x, a], var, p_hat, counts.n_stage_state[h + 1], cfg))


def bonus_table(cfg: BonusConfig, counts: VisitCounts, p_hat: np.ndarray, v_next: np.ndarray, h: int,
                ev: np.ndarray | None = None) -> np.ndarray:
    """Vectorized bonus for every (x, a) at stage ``h``; shape (S, A).

    ``p_hat`` is the full (S, A, S) empirical model and ``ev`` optionally the
    precomputed ``p_hat @ v_next``.
    """
    S, A = counts.S, counts.A
    if h == cfg.H - 1:
        return np.zeros((S, A))
    n = counts.n_sa
    n1 = np.maximum(n, 1)
    if cfg.family == CHERNOFF_HOEFFDING:
        return cfg.ch_constant * cfg.H * cfg.L / np.sqrt(n1)
    c1, c2, c3, _ = cfg.bf_constants
    if ev is None:
        ev = p_hat @ v_next
    var = np.maximum(p_hat @ (v_next * v_next) - ev * ev, 0.0)
    bp = np.minimum(cfg.bprime_numerator / np.maximum(counts.n_stage_state[h + 1], 1), float(cfg.H) ** 2)
    return (np.sqrt(c1 * cfg.L * var / n1)
            + c2 * cfg.H * cfg.L / np.maximum(n - 1, 1)
            + np.sqrt(c3 * (p_hat @ bp) / n1))
