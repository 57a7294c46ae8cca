"""Worst-case regret bounds and the improvement ratios between constant sets."""
from ucbvi_lab.bounds import ratio_report

report = ratio_report(H=10, S=5, A=2, T=10 * 10**6, delta=0.05)
print(report.format_table())
for key in ("L", "theorem1", "ch_original", "theorem2", "bf_original"):
    print(f"{key:>12}: {report.values[key]:.6g}")
