"""Visit counters, the empirical transition model and concentration helpers."""
from __future__ import annotations

import math

import numpy as np


class VisitCounts:
    """Running counts N(x,a), N(x,a,y) and the per-stage state visits N'_h(x)."""

    def __init__(self, S: int, A: int, H: int):
        self.S, self.A, self.H = S, A, H
        self.n_sa = np.zeros((S, A), dtype=np.int64)
        self.n_say = np.zeros((S, A, S), dtype=np.int64)
        self.n_stage_state = np.zeros((H, S), dtype=np.int64)

    def update(self, x: int, a: int, y: int, h: int) -> None:
        if not (0 <= x < self.S and 0 <= y < self.S and 0 <= a < self.A and 0 <= h < self.H):
            raise IndexError(f"transition ({x}, {a}, {y}) at stage {h} out of range")
        self.n_sa[x, a] += 1
        self.n_say[x, a, y] += 1
        self.n_stage_state[h, x] += 1

    @property
    def episodes(self) -> int:
        return int(self.n_stage_state[0].sum())

    def transition_table(self) -> np.ndarray:
        """P-hat for every pair at once; unvisited pairs give all-zero rows."""
        return self.n_say / np.maximum(self.n_sa, 1)[:, :, None]

    def copy(self) -> "VisitCounts":
        out = VisitCounts(self.S, self.A, self.H)
        out.n_sa = self.n_sa.copy()
        out.n_say = self.n_say.copy()
        out.n_stage_state = self.n_stage_state.copy()
        return out

    def validate(self) -> None:
        """Raise ``AssertionError`` if the counters are mutually inconsistent."""
        assert np.all(self.n_sa >= 0) and np.all(self.n_say >= 0)
        assert np.all(self.n_stage_state >= 0)
        assert np.array_equal(self.n_say.sum(axis=2), self.n_sa), "sum_y N(x,a,y) != N(x,a)"
        per_stage = self.n_stage_state.sum(axis=1)
        assert np.all(per_stage == per_stage[0]), "stages saw different episode counts"
        assert self.n_sa.sum() == self.H * per_stage[0], "N(x,a) total != H * episodes"

    def dump(self) -> str:
        lines = [f"episodes {self.episodes}"]
        for x in range(self.S):
            for a in range(self.A):
                row = " ".join(str(int(v)) for v in self.n_say[x, a])
                lines.append(f"N {x} {a} {int(self.n_sa[x, a])} | {row}")
        for h in range(self.H):
            lines.append(f"N' {h} " + " ".join(str(int(v)) for v in self.n_stage_state[h]))
        return "\n".join(lines)


def update_counts(counts: VisitCounts, x: int, a: int, y: int, h: int) -> None:
    counts.update(x, a, y, h)


def empirical_transition(counts: VisitCounts, x: int, a: int) -> np.ndarray:
    return counts.n_say[x, a] / max(1, int(counts.n_sa[x, a]))


def empirical_next_value_variance(p_row, v) -> float:
    """Variance of ``v`` under ``p_row``; zero for an all-zero row."""
    p_row = np.asarray(p_row, dtype=float)
    v = np.asarray(v, dtype=float)
    mean = p_row @ v
    return max(float(p_row @ (v * v) - mean * mean), 0.0)


def bernstein_bernoulli_bound(p: float, n: int, delta: float) -> float:
    """Two-sided Bernstein deviation bound for the mean of n Bernoulli(p) draws.

    ``|p_hat - p| <= sqrt(2 p (1-p) L / n) + 2L / (3n)`` w.p. >= 1 - delta,
    with ``L = ln(2 / delta)``.
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    if not 0 <= p <= 1:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    L = math.log(2.0 / delta)
    return math.sqrt(2.0 * p * (1.0 - p) * L / n) + 2.0 * L / (3.0 * n)
