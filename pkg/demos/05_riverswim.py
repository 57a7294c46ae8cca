"""RiverSwim at desk scale: the Bernstein agents learn to swim, the Hoeffding one keeps paying per episode."""
from ucbvi_lab.config import ExperimentConfig
from ucbvi_lab.environments import EnvSpec
from ucbvi_lab.harness import run_experiment

K = 20_000
cfg = ExperimentConfig(
    env=EnvSpec("riverswim", S=5, A=2, H=10),
    agents=["bf-refined", "bf-original", "ch-refined"],
    K=K, runs=1, master_seed=2, regret_eval_stride=10,
)
result = run_experiment(cfg)
for agent, s in result.summary.items():
    cum = dict(zip(s.episodes, s.mean))
    early, late = cum[K // 10], cum[K] - cum[K - K // 10]
    print(f"{agent:>12}: Reg(K) = {cum[K]:8.1f}, first 10% {early:7.1f}, last 10% {late:7.1f}")
