"""Instance generators: the two tight families and seeded random instances."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Instance, _check_delta


def kappa(delta: float) -> int:
    """Smallest integer i > 0 with sqrt(delta) < (i - 1) / i."""
    _check_delta(delta)
    s = math.sqrt(delta)
    i = max(1, math.ceil(1.0 / (1.0 - s)) - 1)
    while not s < (i - 1) / i:
        i += 1
    return i


@dataclass(frozen=True)
class TightLbParams:
    delta: float
    n: int

    def __post_init__(self):
        _check_delta(self.delta)
        if self.n <= self.kappa:
            raise ValueError(f"n must exceed kappa(delta) = {self.kappa}, got n = {self.n}")

    @property
    def kappa(self) -> int:
        return kappa(self.delta)

    def gamma(self, i: int) -> float:
        """gamma_i for i in kappa..2n+1."""
        n = self.n
        if self.kappa <= i <= n:
            return i / (i - 1)
        if i == n + 1:
            return 1.0
        if n + 2 <= i <= 2 * n:
            return (2 * n + 1 - i) / (2 * n + 2 - i)
        if i == 2 * n + 1:
            return 0.0
        raise ValueError(f"gamma_{i} undefined (kappa = {self.kappa}, n = {n})")


def gen_tight_lb(delta: float, n: int) -> Instance:
    """Two-outcome family whose robust optimum sits within sqrt(delta)/n of the lower bound.

    2n+1 zero-cost actions, rewards (1, 0).  Actions below kappa never hit the
    rewarded outcome; action i >= kappa hits it with probability
    1 - gamma_i sqrt(delta); the last action always does.
    """
    params = TightLbParams(delta, n)
    s = math.sqrt(delta)
    q = np.zeros(2 * n + 1)
    for i in range(params.kappa, 2 * n + 2):
        q[i - 1] = 1.0 - params.gamma(i) * s
    q[2 * n] = 1.0
    F = np.column_stack([q, 1.0 - q])
    return Instance(F, [1.0, 0.0], np.zeros(2 * n + 1))


def gen_tight_ub(delta: float) -> Instance:
    """Two actions with deterministic outcomes and r = (0, 1); OPT(delta) = 1 - delta."""
    _check_delta(delta)
    return Instance([[1.0, 0.0], [0.0, 1.0]], [0.0, 1.0], [0.0, 0.0])


def gen_random(n: int, m: int, seed: int, with_opt_out: bool = False) -> Instance:
    """Random instance: normalized uniform rows, uniform costs and rewards.

    One action is forced to cost zero.  With ``with_opt_out``, outcome 0 gets
    zero reward and action 0 becomes an exact opt-out (cost 0, all mass on
    outcome 0).
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    rng = np.random.default_rng(seed)
    U = rng.random((n, m)) + 1e-12
    F = U / U.sum(axis=1, keepdims=True)
    c = rng.random(n)
    r = rng.random(m)
    c[rng.integers(n)] = 0.0
    if with_opt_out:
        r[0] = 0.0
        F[0] = 0.0
        F[0, 0] = 1.0
        c[0] = 0.0
    return Instance(F, r, c)
