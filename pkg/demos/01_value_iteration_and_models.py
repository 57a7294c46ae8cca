"""Build two environments, solve them exactly, and round-trip one through the text format."""
import numpy as np

from ucbvi_lab.environments import random_mdp, riverswim
from ucbvi_lab.mdp import dumps_mdp, evaluate_policy, exact_value_iteration, loads_mdp

# a small random MDP: transition rows are flat Dirichlet draws, rewards uniform on [0, 1]
env = random_mdp(S=3, A=3, H=5, seed=0)
vstar, pi_star = exact_value_iteration(env)
print("V*_0 =", np.round(vstar.V[0], 4))
print("optimal first-stage actions:", pi_star[0])

# the greedy policy re-evaluated on its own recovers V*
print("policy evaluation agrees:", np.allclose(evaluate_policy(env, pi_star).V, vstar.V))

# RiverSwim: swimming right pays off, but only after a long stochastic swim
river = riverswim(S=5, H=10)
vr, pr = exact_value_iteration(river)
always_left = np.zeros((river.H, river.S), dtype=int)
gap = vr.V[0, 0] - evaluate_policy(river, always_left).V[0, 0]
print(f"RiverSwim value of swimming vs. staying left: gap {gap:.4f}")
print("optimal stage-0 policy (1 = right):", pr[0])

text = dumps_mdp(river)
print(text.splitlines()[0], f"... ({len(text.splitlines())} lines)")
back = loads_mdp(text)
print("round trip exact:", np.array_equal(back.P, river.P) and np.array_equal(back.R, river.R))
