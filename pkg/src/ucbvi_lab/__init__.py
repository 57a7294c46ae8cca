"""Tabular episodic RL lab: UCBVI with refined bonuses, an MVP baseline, exact-regret experiments."""

__version__ = "0.1.0"

from .agents import MVPAgent, OptimisticValues, UCBVIAgent
from .bonuses import BonusConfig, bonus_bf, bonus_ch, bprime, log_term
from .bounds import ratio_report, theorem1_bound, theorem2_bound
from .environments import EnvSpec, random_mdp, riverswim
from .mdp import TabularMDP, ValueFunctions, evaluate_policy, exact_value_iteration, greedy_policy
from .stats import VisitCounts, bernstein_bernoulli_bound, empirical_next_value_variance, empirical_transition

__all__ = [
    "BonusConfig", "EnvSpec", "MVPAgent", "OptimisticValues", "TabularMDP", "UCBVIAgent",
    "ValueFunctions", "VisitCounts", "bernstein_bernoulli_bound", "bonus_bf", "bonus_ch", "bprime",
    "empirical_next_value_variance", "empirical_transition", "evaluate_policy",
    "exact_value_iteration", "greedy_policy", "log_term", "random_mdp", "ratio_report",
    "riverswim", "theorem1_bound", "theorem2_bound",
]
