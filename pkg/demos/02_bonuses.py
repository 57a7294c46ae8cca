"""How the two bonus families shrink with visits, refined vs. original constants."""
import numpy as np

from ucbvi_lab.bonuses import BonusConfig, bf_terms, bonus_ch

H, S, A, K = 5, 3, 3, 10_000
cfgs = {v: BonusConfig.from_variant(v, delta=0.05, H=H, S=S, A=A, T=K * H)
        for v in ("ch-refined", "ch-original", "bf-refined", "bf-original")}
print(f"log term L = {cfgs['ch-refined'].L:.4f}")

p_hat = np.array([0.2, 0.5, 0.3])
print(f"{'n':>7} {'ch-ref':>9} {'ch-orig':>9} {'bf-ref':>9} {'bf-orig':>9}")
for n in (1, 10, 100, 1000, 10_000):
    # the next-stage counts grow with n, so the correction term decays too
    ch = [bonus_ch(n, cfgs[v]) for v in ("ch-refined", "ch-original")]
    bf = [sum(bf_terms(n, 1.5, p_hat, [n] * S, cfgs[v])) for v in ("bf-refined", "bf-original")]
    print(f"{n:>7} " + " ".join(f"{b:9.3f}" for b in ch + bf))

# the Chernoff-Hoeffding ratio is exactly the constant ratio
print("ch-original / ch-refined =", bonus_ch(50, cfgs["ch-original"]) / bonus_ch(50, cfgs["ch-refined"]))
