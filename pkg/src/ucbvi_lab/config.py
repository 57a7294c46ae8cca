"""Experiment configuration and its ``key = value`` file format."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .agents import MVP_C1
from .bonuses import VARIANTS
from .environments import RIVERSWIM_DEFAULTS, EnvSpec

AGENT_IDS = tuple(VARIANTS) + ("mvp",)

_INT_KEYS = {"env.S", "env.A", "env.H", "env.seed", "K", "runs", "master_seed", "regret_eval_stride"}
_FLOAT_KEYS = {"delta", "mvp_c1"} | {f"env.{k}" for k in RIVERSWIM_DEFAULTS}
_STR_KEYS = {"env.kind", "agents", "output_dir"}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    env: EnvSpec
    agents: list[str]
    K: int
    runs: int = 10
    master_seed: int = 0
    delta: float = 0.05
    regret_eval_stride: int = 1
    output_dir: str = "results"
    mvp_c1: float = MVP_C1

    def __post_init__(self):
        if self.K < 1:
            raise ConfigError("K must be >= 1")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.regret_eval_stride < 1:
            raise ConfigError("regret_eval_stride must be >= 1")
        if not 0 < self.delta < 1:
            raise ConfigError("delta must be in (0, 1)")
        if not self.agents:
            raise ConfigError("at least one agent is required")
        for a in self.agents:
            if a not in AGENT_IDS:
                raise ConfigError(f"unknown agent {a!r}; expected one of {AGENT_IDS}")
        if len(set(self.agents)) != len(self.agents):
            raise ConfigError("duplicate agents")

    @property
    def T(self) -> int:
        return self.K * self.env.H

    def to_text(self) -> str:
        lines = [
            f"env.kind = {self.env.kind}",
            f"env.S = {self.env.S}",
            f"env.A = {self.env.A}",
            f"env.H = {self.env.H}",
            f"env.seed = {self.env.seed}",
        ]
        lines += [f"env.{k} = {v!r}" for k, v in sorted(self.env.riverswim_params.items())]
        lines += [
            f"agents = {', '.join(self.agents)}",
            f"K = {self.K}",
            f"runs = {self.runs}",
            f"master_seed = {self.master_seed}",
            f"delta = {self.delta!r}",
            f"regret_eval_stride = {self.regret_eval_stride}",
            f"mvp_c1 = {self.mvp_c1!r}",
        ]
        return "\n".join(lines) + "\n"


def parse_config(text: str) -> ExperimentConfig:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _INT_KEYS | _FLOAT_KEYS | _STR_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        raw[key] = value

    def get(key, conv, default=None):
        if key not in raw:
            if default is None:
                raise ConfigError(f"missing required key {key!r}")
            return default
        try:
            return conv(raw[key])
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {raw[key]!r}") from exc

    kind = get("env.kind", str)
    rs_params = {k: get(f"env.{k}", float) for k in RIVERSWIM_DEFAULTS if f"env.{k}" in raw}
    try:
        env = EnvSpec(
            kind=kind,
            S=get("env.S", int),
            A=get("env.A", int, 2 if kind == "riverswim" else None),
            H=get("env.H", int),
            seed=get("env.seed", int, 0),
            riverswim_params=rs_params,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    agents = [a.strip() for a in get("agents", str).split(",") if a.strip()]
    return ExperimentConfig(
        env=env,
        agents=agents,
        K=get("K", int),
        runs=get("runs", int, 10),
        master_seed=get("master_seed", int, 0),
        delta=get("delta", float, 0.05),
        regret_eval_stride=get("regret_eval_stride", int, 1),
        output_dir=get("output_dir", str, "results"),
        mvp_c1=get("mvp_c1", float, MVP_C1),
    )


def load_config(path: str | Path) -> ExperimentConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))
