"""Finite-horizon tabular MDPs: exact value iteration, policy evaluation, text I/O.

Stages are 0-based throughout: a horizon-H episode visits stages 0..H-1 and
``V[H]`` is the terminal zero row.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

FORMAT_HEADER = "tabmdp v1"
_ROW_TOL = 1e-9


class MDPFormatError(ValueError):
    """Raised when a serialized MDP cannot be parsed."""


@dataclass
class TabularMDP:
    P: np.ndarray  # (S, A, S) transition probabilities
    R: np.ndarray  # (S, A) deterministic rewards in [0, 1]
    H: int
    initial_state: int = 0

    def __post_init__(self):
        self.P = np.ascontiguousarray(self.P, dtype=np.float64)
        self.R = np.ascontiguousarray(self.R, dtype=np.float64)
        self.H = int(self.H)
        self.initial_state = int(self.initial_state)
        self.validate()

    @cached_property
    def cdf(self) -> np.ndarray:
        """Cumulative transition rows, for inverse-CDF sampling."""
        return np.cumsum(self.P, axis=2)

    @property
    def S(self) -> int:
        return self.P.shape[0]

    @property
    def A(self) -> int:
        return self.P.shape[1]

    def validate(self) -> None:
        P, R = self.P, self.R
        if P.ndim != 3 or P.shape[0] != P.shape[2]:
            raise ValueError(f"P must have shape (S, A, S), got {P.shape}")
        S, A = P.shape[:2]
        if S < 1 or A < 1 or self.H < 1:
            raise ValueError("S, A and H must all be >= 1")
        if R.shape != (S, A):
            raise ValueError(f"R must have shape {(S, A)}, got {R.shape}")
        if not np.all(np.isfinite(P)) or np.any(P < 0):
            raise ValueError("transition probabilities must be finite and nonnegative")
        bad = np.abs(P.sum(axis=2) - 1.0) > _ROW_TOL
        if np.any(bad):
            x, a = np.argwhere(bad)[0]
            raise ValueError(f"P(.|{x},{a}) sums to {P[x, a].sum()!r}, not 1")
        if not np.all(np.isfinite(R)) or np.any(R < 0) or np.any(R > 1):
            raise ValueError("rewards must lie in [0, 1]")
        if not 0 <= self.initial_state < S:
            raise ValueError(f"initial_state {self.initial_state} out of range for S={S}")


@dataclass
class ValueFunctions:
    V: np.ndarray  # (H+1, S), V[H] == 0
    Q: np.ndarray  # (H, S, A)


def exact_value_iteration(mdp: TabularMDP) -> tuple[ValueFunctions, np.ndarray]:
    """Backward induction for the optimal values; returns ``(values, policy)``.

    The policy is an (H, S) integer table, greedy with lowest-index ties.
    """
    S, A, H = mdp.S, mdp.A, mdp.H
    V = np.zeros((H + 1, S))
    Q = np.zeros((H, S, A))
    for h in range(H - 1, -1, -1):
        Q[h] = mdp.R + mdp.P @ V[h + 1]
        V[h] = Q[h].max(axis=1)
    return ValueFunctions(V=V, Q=Q), greedy_policy(Q)


def evaluate_policy(mdp: TabularMDP, policy: np.ndarray) -> ValueFunctions:
    policy = np.asarray(policy)
    S, A, H = mdp.S, mdp.A, mdp.H
    if policy.shape != (H, S):
        raise ValueError(f"policy must have shape {(H, S)}, got {policy.shape}")
    if np.any(policy < 0) or np.any(policy >= A):
        raise ValueError("policy contains an action index outside [0, A)")
    states = np.arange(S)
    V = np.zeros((H + 1, S))
    Q = np.zeros((H, S, A))
    for h in range(H - 1, -1, -1):
        Q[h] = mdp.R + mdp.P @ V[h + 1]
        V[h] = Q[h, states, policy[h]]
    return ValueFunctions(V=V, Q=Q)


def greedy_policy(q: np.ndarray) -> np.ndarray:
    """Argmax over the last axis; ``np.argmax`` already picks the lowest index on ties."""
    return np.argmax(np.asarray(q), axis=-1)


def policy_value_at(mdp: TabularMDP, policy: np.ndarray, state: int | None = None) -> float:
    """Value of ``policy`` at stage 0 from ``state`` (default: the initial state).

    Leaner than :func:`evaluate_policy`; used in the experiment hot loop.
    """
    x0 = mdp.initial_state if state is None else state
    states = np.arange(mdp.S)
    v = np.zeros(mdp.S)
    for h in range(mdp.H - 1, -1, -1):
        a = policy[h]
        v = mdp.R[states, a] + mdp.P[states, a] @ v
    return float(v[x0])


def all_deterministic_policies(S: int, A: int, H: int) -> Iterable[np.ndarray]:
    """Every stage-dependent deterministic policy; A**(S*H) of them."""
    total = A ** (S * H)
    for idx in range(total):
        digits = np.empty(S * H, dtype=np.int64)
        for i in range(S * H):
            idx, digits[i] = divmod(idx, A)
        yield digits.reshape(H, S)


# -- serialization ---------------------------------------------------------------------


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def dumps_mdp(mdp: TabularMDP) -> str:
    lines = [f"{FORMAT_HEADER} {mdp.S} {mdp.A} {mdp.H} {mdp.initial_state}"]
    for x in range(mdp.S):
        for a in range(mdp.A):
            lines.append(f"R {x} {a} {_fmt(mdp.R[x, a])}")
    for x in range(mdp.S):
        for a in range(mdp.A):
            for y in range(mdp.S):
                lines.append(f"P {x} {a} {y} {_fmt(mdp.P[x, a, y])}")
    return "\n".join(lines) + "\n"


def loads_mdp(text: str) -> TabularMDP:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MDPFormatError("empty input")
    head = lines[0].split()
    if len(head) != 6 or " ".join(head[:2]) != FORMAT_HEADER:
        raise MDPFormatError(f"bad header: {lines[0]!r}")
    try:
        S, A, H, init = (int(v) for v in head[2:])
    except ValueError as exc:
        raise MDPFormatError(f"bad header: {lines[0]!r}") from exc
    expected = 1 + S * A + S * A * S
    if len(lines) != expected:
        raise MDPFormatError(f"expected {expected} lines, got {len(lines)}")
    R = np.full((S, A), np.nan)
    P = np.full((S, A, S), np.nan)
    for ln in lines[1:]:
        tok = ln.split()
        try:
            idx = [int(t) for t in tok[1:-1]]
            if any(i < 0 for i in idx):
                raise MDPFormatError(f"negative index: {ln!r}")
            if tok[0] == "R" and len(tok) == 4:
                R[int(tok[1]), int(tok[2])] = float(tok[3])
            elif tok[0] == "P" and len(tok) == 5:
                P[int(tok[1]), int(tok[2]), int(tok[3])] = float(tok[4])
            else:
                raise MDPFormatError(f"unrecognized line: {ln!r}")
        except (IndexError, ValueError) as exc:
            raise MDPFormatError(f"bad line: {ln!r}") from exc
    if np.isnan(R).any() or np.isnan(P).any():
        raise MDPFormatError("missing R or P entries")
    return TabularMDP(P=P, R=R, H=H, initial_state=init)


def save_mdp(mdp: TabularMDP, path: str | Path) -> None:
    Path(path).write_text(dumps_mdp(mdp), encoding="utf-8")


def load_mdp(path: str | Path) -> TabularMDP:
    return loads_mdp(Path(path).read_text(encoding="utf-8"))
