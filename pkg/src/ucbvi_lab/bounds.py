"""High-probability regret upper bounds and the refined/original comparison table."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .bonuses import BF_CONSTANTS, CH_CONSTANTS, log_term

E = math.e

# Coefficients of each bound, in the order of the terms of the formulas below.
#   CH: [H L sqrt(S A T), H^2 S^2 A L^2]
#   BF: [L sqrt(H S A T), H^2 S^2 A L^2, sqrt(H^2 T L)]
# Every term carries a factor e. The original coefficients are those of the
# earlier analysis with the missing e restored.
CH_BOUND_CONSTANTS = {"refined": (10.0, 8.0 / 3.0), "original": (20.0, 250.0)}
BF_BOUND_CONSTANTS = {"refined": (24.0, 616.0, 4.0), "original": (30.0, 2500.0, 4.0)}


def _ch_terms(H, S, A, T, L):
    return (H * L * math.sqrt(S * A * T), H**2 * S**2 * A * L**2)


def _bf_terms(H, S, A, T, L):
    return (L * math.sqrt(H * S * A * T), H**2 * S**2 * A * L**2, math.sqrt(H**2 * T * L))


def _bound(consts, terms) -> float:
    return E * sum(c * t for c, t in zip(consts, terms))


def ch_bound(H: int, S: int, A: int, T: int, delta: float, constants: str = "refined") -> float:
    L = log_term(H, S, A, T, delta)
    return _bound(CH_BOUND_CONSTANTS[constants], _ch_terms(H, S, A, T, L))


def bf_bound(H: int, S: int, A: int, T: int, delta: float, constants: str = "refined") -> float:
    L = log_term(H, S, A, T, delta)
    return _bound(BF_BOUND_CONSTANTS[constants], _bf_terms(H, S, A, T, L))


def theorem1_bound(H: int, S: int, A: int, T: int, delta: float) -> float:
    """10 e H L sqrt(SAT) + (8/3) e H^2 S^2 A L^2."""
    return ch_bound(H, S, A, T, delta, "refined")


def theorem2_bound(H: int, S: int, A: int, T: int, delta: float) -> float:
    """24 e L sqrt(HSAT) + 616 e H^2 S^2 A L^2 + 4 e sqrt(H^2 T L)."""
    return bf_bound(H, S, A, T, delta, "refined")


@dataclass
class BoundReport:
    ch_bonus_ratio: float
    ch_regret_ratio: float
    bf_bonus_ratio: float
    bf_regret_ratio: float
    ch_lower_order_ratio: float
    bf_lower_order_ratio: float
    values: dict = field(default_factory=dict)  # filled when dimensions are given

    def rows(self) -> list[tuple[str, float, float]]:
        return [("CH", self.ch_bonus_ratio, self.ch_regret_ratio),
                ("BF", self.bf_bonus_ratio, self.bf_regret_ratio)]

    def format_table(self) -> str:
        out = [f"{'':4}{'bonus ratio':>14}{'regret bound ratio':>20}{'lower-order ratio':>20}"]
        out.append(f"{'CH':4}{self.ch_bonus_ratio:>14.6g}{self.ch_regret_ratio:>20.6g}"
                   f"{self.ch_lower_order_ratio:>20.6g}")
        out.append(f"{'BF':4}{self.bf_bonus_ratio:>14.6g}{self.bf_regret_ratio:>20.6g}"
                   f"{self.bf_lower_order_ratio:>20.6g}")
        return "\n".join(out)


def ratio_report(H: int | None = None, S: int | None = None, A: int | None = None,
                 T: int | None = None, delta: float | None = None) -> BoundReport:
    """Original-over-refined improvement ratios, derived from the constant sets.

    The bonus ratio compares the dominant bonus term (the count-only term for
    CH, the variance term for BF); the regret ratio compares the sqrt(T) terms.
    """
    bf_ref, bf_orig = BF_CONSTANTS["refined"], BF_CONSTANTS["original"]
    report = BoundReport(
        ch_bonus_ratio=CH_CONSTANTS["original"] / CH_CONSTANTS["refined"],
        ch_regret_ratio=CH_BOUND_CONSTANTS["original"][0] / CH_BOUND_CONSTANTS["refined"][0],
        bf_bonus_ratio=math.sqrt(bf_orig[0] / bf_ref[0]),
        bf_regret_ratio=BF_BOUND_CONSTANTS["original"][0] / BF_BOUND_CONSTANTS["refined"][0],
        ch_lower_order_ratio=CH_BOUND_CONSTANTS["original"][1] / CH_BOUND_CONSTANTS["refined"][1],
        bf_lower_order_ratio=BF_BOUND_CONSTANTS["original"][1] / BF_BOUND_CONSTANTS["refined"][1],
    )
    if None not in (H, S, A, T, delta):
        L = log_term(H, S, A, T, delta)
        ch_t, bf_t = _ch_terms(H, S, A, T, L), _bf_terms(H, S, A, T, L)
        report.values = {
            "L": L,
            "theorem1": theorem1_bound(H, S, A, T, delta),
            "theorem2": theorem2_bound(H, S, A, T, delta),
            "ch_original": ch_bound(H, S, A, T, delta, "original"),
            "bf_original": bf_bound(H, S, A, T, delta, "original"),
            "theorem1_dominant": E * CH_BOUND_CONSTANTS["refined"][0] * ch_t[0],
            "theorem2_dominant": E * BF_BOUND_CONSTANTS["refined"][0] * bf_t[0],
        }
    return report
