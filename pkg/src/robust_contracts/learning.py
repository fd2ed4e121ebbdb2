"""Online learning of robust contracts: UCB1 over a uniform contract grid.

Each round an agent type is drawn from ``lam``, the agent plays its worst
delta-best response to the posted contract, and the principal sees only the
realized outcome (through its utility r_w - p_w).  Regret is the pseudo-regret
against grid approximations of OPT(C, delta) and OPT(C), computed from exact
expected utilities rather than realized ones.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .model import (
    Instance,
    TypedInstance,
    _check_delta,
    batch_worst_delta_response,
    worst_delta_response,
)
from .oracle import GridSpec, grid_opt_typed, grid_opt_typed_nonrobust, typed_robust_values

CSV_COLUMNS = ("round", "arm", "expected_utility", "cum_regret_robust", "cum_regret_nonrobust")
BASELINE_MODES = ("robust", "nonrobust", "both")


def default_epsilon(horizon: int, m: int) -> float:
    return horizon ** (-1.0 / (m + 1))


def build_grid(epsilon: float, m: int) -> np.ndarray:
    """Arms: every contract in [0,1]^m with coordinates in {0, eps, 2eps, ..., 1}."""
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    grid = GridSpec(epsilon)
    grid.check(m)
    return grid.points(m)


@dataclass(frozen=True)
class LearnConfig:
    horizon: int
    delta: float
    epsilon: Optional[float] = None
    seed: int = 0
    baseline: str = "both"
    baseline_step: float = 0.01

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be a positive integer")
        _check_delta(self.delta)
        if self.epsilon is not None and not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if self.baseline not in BASELINE_MODES:
            raise ValueError(f"baseline must be one of {BASELINE_MODES}")

    def resolve_epsilon(self, m: int) -> float:
        return self.epsilon if self.epsilon is not None else default_epsilon(self.horizon, m)


def _sample(probs: np.ndarray, u: float) -> int:
    cdf = np.cumsum(probs)
    return min(int(np.searchsorted(cdf, u * cdf[-1], side="right")), len(probs) - 1)


@dataclass(frozen=True)
class Step:
    """One interaction.  ``agent_type`` and ``action`` are hidden from the learner."""

    agent_type: int
    action: int
    outcome: int
    utility: float


def _step_from_uniforms(tinst: TypedInstance, p: np.ndarray, action_of, u_type, u_outcome) -> Step:
    t = _sample(tinst.lam, u_type)
    a = action_of(t)
    inst = tinst.types[t]
    w = _sample(inst.F[a], u_outcome)
    return Step(t, a, w, float(tinst.r[w] - p[w]))


def environment_step(tinst: TypedInstance, p, delta: float, rng: np.random.Generator) -> Step:
    """Draw a type, let it play its worst delta-best response to ``p``, draw an outcome."""
    p = np.asarray(p, dtype=float)
    if p.shape != (tinst.m,) or np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError("contract must lie in [0,1]^m")
    u_type, u_outcome = rng.random(2)
    return _step_from_uniforms(
        tinst, p, lambda t: worst_delta_response(tinst.types[t], p, delta)[0], u_type, u_outcome
    )


class GridEnvironment:
    """Environment restricted to a fixed set of arms, with responses precomputed."""

    def __init__(self, tinst: TypedInstance, delta: float, arms: np.ndarray):
        self.tinst = tinst
        self.delta = delta
        self.arms = arms
        self.responses = np.stack([
            batch_worst_delta_response(inst.F, inst.r, inst.c, arms, delta)[0]
            for inst in tinst.types
        ])
        self.expected = typed_robust_values(tinst, arms, delta)

    def step(self, arm: int, u_type: float, u_outcome: float) -> Step:
        return _step_from_uniforms(
            self.tinst, self.arms[arm], lambda t: int(self.responses[t, arm]), u_type, u_outcome
        )


class UCB1:
    """UCB1 on rewards in [0, 1]; sees nothing but (arm, reward) pairs."""

    def __init__(self, n_arms: int):
        self.counts = np.zeros(n_arms, dtype=np.int64)
        self.means = np.zeros(n_arms)
        self.t = 0

    def select(self) -> int:
        if self.t < len(self.counts):
            return self.t
        bonus = np.sqrt(2.0 * math.log(self.t) / self.counts)
        return int(np.argmax(self.means + bonus))

    def update(self, arm: int, reward: float) -> None:
        self.t += 1
        self.counts[arm] += 1
        self.means[arm] += (reward - self.means[arm]) / self.counts[arm]


@dataclass(frozen=True)
class Baselines:
    opt_robust: Optional[float]
    opt_nonrobust: Optional[float]
    robust_contract: Optional[np.ndarray]
    nonrobust_contract: Optional[np.ndarray]
    step: float
    grid_approximation: bool = True


def compute_baselines(
    tinst: TypedInstance, delta: float, grid: GridSpec, mode: str = "both"
) -> Baselines:
    """Grid approximations of OPT(C, delta) and OPT(C) over [0,1]^m."""
    if mode not in BASELINE_MODES:
        raise ValueError(f"mode must be one of {BASELINE_MODES}")
    rob = grid_opt_typed(tinst, delta, grid) if mode in ("robust", "both") else (None, None)
    non = grid_opt_typed_nonrobust(tinst, grid) if mode in ("nonrobust", "both") else (None, None)
    return Baselines(rob[1], non[1], rob[0], non[0], grid.step)


@dataclass
class LearnRun:
    config: LearnConfig
    epsilon: float
    arms: np.ndarray
    arm_index: np.ndarray
    agent_types: np.ndarray
    actions: np.ndarray
    outcomes: np.ndarray
    realized: np.ndarray
    expected: np.ndarray
    baselines: Baselines
    cum_regret_robust: Optional[np.ndarray] = None
    cum_regret_nonrobust: Optional[np.ndarray] = None
    metadata: dict = field(default_factory=dict)

    @property
    def horizon(self) -> int:
        return len(self.arm_index)

    def regret(self, which: str = "robust") -> float:
        curve = self.cum_regret_robust if which == "robust" else self.cum_regret_nonrobust
        if curve is None:
            raise ValueError(f"{which} baseline was not computed for this run")
        return float(curve[-1])

    def write_csv(self, path: str | Path) -> None:
        """Per-round CSV preceded by ``# key=value`` metadata lines."""
        def fmt(curve, t):
            return "" if curve is None else repr(float(curve[t]))

        with open(path, "w", newline="") as fh:
            for key, value in self.metadata.items():
                fh.write(f"# {key}={value}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for t in range(self.horizon):
                writer.writerow([
                    t + 1,
                    int(self.arm_index[t]),
                    repr(float(self.expected[t])),
                    fmt(self.cum_regret_robust, t),
                    fmt(self.cum_regret_nonrobust, t),
                ])


def run_ucb1(
    tinst: TypedInstance | Instance,
    cfg: LearnConfig,
    baselines: Optional[Baselines] = None,
    learner: Optional[UCB1] = None,
    arms: Optional[np.ndarray] = None,
) -> LearnRun:
    """Post grid contracts chosen by UCB1 for ``cfg.horizon`` rounds.

    Realized utilities in [-1, 1] are mapped to (u + 1) / 2 before they reach
    the learner; all accounting stays on the original scale.  ``arms``
    replaces the uniform grid with an explicit contract set.
    """
    if isinstance(tinst, Instance):
        tinst = TypedInstance.single(tinst)
    m = tinst.m
    eps = cfg.resolve_epsilon(m)
    if arms is None:
        arms = build_grid(eps, m)
    else:
        arms = np.atleast_2d(np.asarray(arms, dtype=float))
        if arms.shape[1] != m or np.any(arms < 0.0) or np.any(arms > 1.0):
            raise ValueError("arms must be contracts in [0,1]^m")
    env = GridEnvironment(tinst, cfg.delta, arms)
    if baselines is None:
        baselines = compute_baselines(tinst, cfg.delta, GridSpec(cfg.baseline_step), cfg.baseline)
    learner = learner or UCB1(len(arms))

    T = cfg.horizon
    rng = np.random.default_rng(cfg.seed)
    uniforms = rng.random((T, 2))
    arm_index = np.empty(T, dtype=np.int64)
    agent_types = np.empty(T, dtype=np.int64)
    actions = np.empty(T, dtype=np.int64)
    outcomes = np.empty(T, dtype=np.int64)
    realized = np.empty(T)
    for t in range(T):
        k = learner.select()
        step = env.step(k, uniforms[t, 0], uniforms[t, 1])
        learner.update(k, (step.utility + 1.0) / 2.0)
        arm_index[t] = k
        agent_types[t] = step.agent_type
        actions[t] = step.action
        outcomes[t] = step.outcome
        realized[t] = step.utility

    expected = env.expected[arm_index]
    cum = np.cumsum(expected)
    rounds = np.arange(1, T + 1)
    reg_rob = None if baselines.opt_robust is None else rounds * baselines.opt_robust - cum
    reg_non = None if baselines.opt_nonrobust is None else rounds * baselines.opt_nonrobust - cum
    metadata = {
        "seed": cfg.seed,
        "T": T,
        "epsilon": repr(eps),
        "delta": repr(cfg.delta),
        "grid_size": len(arms),
        "baseline_step": repr(baselines.step),
        "opt_robust": "" if baselines.opt_robust is None else repr(baselines.opt_robust),
        "opt_nonrobust": "" if baselines.opt_nonrobust is None else repr(baselines.opt_nonrobust),
        "baselines": "grid approximation",
    }
    return LearnRun(
        cfg, eps, arms, arm_index, agent_types, actions, outcomes, realized, expected,
        baselines, reg_rob, reg_non, metadata,
    )
