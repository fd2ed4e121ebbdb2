"""Non-robust benchmarks, price-of-robustness bounds and the reward-shift transform."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lp import LinearProgram, LpStatus, solve_lp
from .model import Instance, _check_delta, as_contract


def social_welfare(inst: Instance) -> float:
    return float(inst.welfare.max())


def min_payment_lp(inst: Instance, a: int) -> LinearProgram:
    """Cheapest contract making ``a`` a (weak) best response, as a max-LP."""
    F, c = inst.F, inst.c
    rows = [(F[b] - F[a], "<=", c[b] - c[a]) for b in range(inst.n) if b != a]
    return LinearProgram.create(-F[a], rows)


@dataclass(frozen=True, eq=False)
class NonRobustOptimum:
    value: float
    contract: np.ndarray
    action: int


def opt_nonrobust(inst: Instance) -> NonRobustOptimum:
    """OPT under exact best responses with principal-favoring tie-breaks.

    Actions whose incentive LP is infeasible cannot be induced by any contract
    and are skipped.  Ties in value keep the lowest action index.
    """
    best = None
    for a in range(inst.n):
        res = solve_lp(min_payment_lp(inst, a))
        if res.status is not LpStatus.OPTIMAL:
            continue
        value = float(inst.expected_rewards[a] + res.value)
        if best is None or value > best.value:
            best = NonRobustOptimum(value, res.x, a)
    assert best is not None, "no implementable action"
    return best


@dataclass(frozen=True)
class BoundsReport:
    opt: float
    sw: float
    delta: float

    @property
    def lb(self) -> float:
        return self.opt - 2.0 * math.sqrt(self.delta) + self.delta

    @property
    def ub(self) -> float:
        return max(0.0, self.sw - self.delta)


def bounds(inst: Instance, delta: float) -> BoundsReport:
    _check_delta(delta)
    return BoundsReport(opt_nonrobust(inst).value, social_welfare(inst), float(delta))


def shift_contract(p, r, eps: float) -> np.ndarray:
    """Blend ``p`` towards the reward vector: (1 - sqrt(eps)) p + sqrt(eps) r."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    p = as_contract(p)
    r = np.asarray(r, dtype=float)
    s = math.sqrt(eps)
    return (1.0 - s) * p + s * r
