"""A short regret comparison on a random MDP, written out as CSV + SVG."""
import sys
import tempfile

from ucbvi_lab.config import ExperimentConfig
from ucbvi_lab.environments import EnvSpec
from ucbvi_lab.harness import run_experiment
from ucbvi_lab.outputs import emit_outputs

cfg = ExperimentConfig(
    env=EnvSpec("random", S=3, A=3, H=5, seed=2025),
    agents=["bf-refined", "bf-original", "ch-refined", "mvp"],
    K=2000, runs=3, master_seed=1,
)
result = run_experiment(cfg)
for agent, s in result.summary.items():
    print(f"{agent:>12}: Reg(K) = {s.mean[-1]:8.1f}  95% CI [{s.ci_low[-1]:.1f}, {s.ci_high[-1]:.1f}]")

out = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="regret_")
emit_outputs(result, out)
print("outputs written to", out)
