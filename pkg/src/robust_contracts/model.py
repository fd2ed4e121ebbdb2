"""Hidden-action principal-agent instances and agent response semantics.

An instance is a tuple (F, r, c): ``F[a]`` is the outcome distribution of
action ``a``, ``r`` the principal's reward per outcome and ``c`` the agent's
cost per action.  A contract is a nonnegative payment vector over outcomes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

# a in A^delta(p)  iff  u_A(p, a) - (max_u_A - delta) > TAU_MEM
TAU_MEM = 1e-7
ROW_SUM_TOL = 1e-9


class Membership(str, Enum):
    STRICT = "strict"
    PESSIMISTIC = "pessimistic"


def _frozen(x, ndim: int) -> np.ndarray:
    arr = np.array(x, dtype=float, ndmin=ndim)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    """One principal-agent problem.

    ``F`` has shape (n, m); ``r`` has length m and ``c`` length n.  Arrays are
    stored read-only, so instances can be shared freely between threads.
    """

    F: np.ndarray
    r: np.ndarray
    c: np.ndarray
    action_labels: Optional[tuple[str, ...]] = None
    outcome_labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "F", _frozen(self.F, 2))
        object.__setattr__(self, "r", _frozen(self.r, 1))
        object.__setattr__(self, "c", _frozen(self.c, 1))
        if self.action_labels is not None:
            object.__setattr__(self, "action_labels", tuple(self.action_labels))
        if self.outcome_labels is not None:
            object.__setattr__(self, "outcome_labels", tuple(self.outcome_labels))

    @property
    def n(self) -> int:
        return self.F.shape[0]

    @property
    def m(self) -> int:
        return self.F.shape[1]

    @property
    def expected_rewards(self) -> np.ndarray:
        """R_a = F_a . r for every action."""
        return self.F @ self.r

    @property
    def welfare(self) -> np.ndarray:
        """Social welfare F_a . r - c_a of every action (contract independent)."""
        return self.F @ self.r - self.c

    def opt_out_actions(self) -> list[int]:
        R = self.expected_rewards
        return [a for a in range(self.n) if self.c[a] == 0.0 and abs(R[a]) <= ROW_SUM_TOL]

    def action_name(self, a: int) -> str:
        if self.action_labels is not None:
            return self.action_labels[a]
        return f"a{a + 1}"

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.F.shape == other.F.shape
            and np.array_equal(self.F, other.F)
            and np.array_equal(self.r, other.r)
            and np.array_equal(self.c, other.c)
            and self.action_labels == other.action_labels
            and self.outcome_labels == other.outcome_labels
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def extend(self, other: "ValidationReport", prefix: str = "") -> None:
        self.errors.extend(prefix + e for e in other.errors)
        self.warnings.extend(prefix + w for w in other.warnings)


def validate_instance(inst: Instance) -> ValidationReport:
    """Check shapes, stochasticity and ranges; warn when no opt-out action exists."""
    rep = ValidationReport()
    F, r, c = inst.F, inst.r, inst.c
    if F.ndim != 2 or F.shape[0] < 1 or F.shape[1] < 1:
        rep.errors.append(f"F must be a nonempty n x m matrix, got shape {F.shape}")
        return rep
    n, m = F.shape
    if r.shape != (m,):
        rep.errors.append(f"dimension mismatch: r has {r.size} entries, expected m={m}")
    if c.shape != (n,):
        rep.errors.append(f"dimension mismatch: c has {c.size} entries, expected n={n}")
    if inst.action_labels is not None and len(inst.action_labels) != n:
        rep.errors.append(f"dimension mismatch: {len(inst.action_labels)} action labels for n={n}")
    if inst.outcome_labels is not None and len(inst.outcome_labels) != m:
        rep.errors.append(f"dimension mismatch: {len(inst.outcome_labels)} outcome labels for m={m}")
    if rep.errors:
        return rep

    if not (np.all(np.isfinite(F)) and np.all(np.isfinite(r)) and np.all(np.isfinite(c))):
        rep.errors.append("non-finite entries")
        return rep
    for a in range(n):
        s = F[a].sum()
        if abs(s - 1.0) > ROW_SUM_TOL:
            rep.errors.append(f"row {a} not stochastic: sums to {s:.12g}")
        if np.any(F[a] < 0.0) or np.any(F[a] > 1.0):
            rep.errors.append(f"row {a} has probabilities outside [0,1]")
    if np.any(r < 0.0) or np.any(r > 1.0):
        rep.errors.append("rewards outside [0,1]")
    if np.any(c < 0.0) or np.any(c > 1.0):
        rep.errors.append("costs outside [0,1]")
    if not rep.errors and not inst.opt_out_actions():
        rep.warnings.append("no opt-out action (zero cost and zero expected reward)")
    return rep


def as_contract(p: Sequence[float] | np.ndarray, m: Optional[int] = None) -> np.ndarray:
    """Coerce ``p`` to a float payment vector, enforcing limited liability."""
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"contract must be a vector, got shape {arr.shape}")
    if m is not None and arr.size != m:
        raise ValueError(f"contract has {arr.size} payments, instance has m={m} outcomes")
    if np.any(arr < 0.0):
        raise ValueError("contract payments must be nonnegative")
    return arr


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")


# Every utility goes through these two vector forms so that scalar, batched
# and reported values agree to the last bit.

def agent_utilities(inst: Instance, p) -> np.ndarray:
    return inst.F @ as_contract(p, inst.m) - inst.c


def principal_utilities(inst: Instance, p) -> np.ndarray:
    return inst.expected_rewards - inst.F @ as_contract(p, inst.m)


def agent_utility(inst: Instance, p, a: int) -> float:
    return float(agent_utilities(inst, p)[a])


def principal_utility(inst: Instance, p, a: int) -> float:
    return float(principal_utilities(inst, p)[a])


def _delta_mask(uA: np.ndarray, delta: float, mode: Membership) -> np.ndarray:
    slack = uA - (uA.max(axis=-1, keepdims=True) - delta)
    if Membership(mode) is Membership.STRICT:
        return slack > TAU_MEM
    return slack >= -TAU_MEM


def delta_best_responses(
    inst: Instance, p, delta: float, mode: Membership = Membership.STRICT
) -> set[int]:
    """The agent's delta-best responses A^delta(p)."""
    _check_delta(delta)
    mask = _delta_mask(agent_utilities(inst, p), delta, mode)
    # the exact best response always has slack delta > TAU_MEM
    assert mask.any(), "empty delta-best-response set"
    return set(np.flatnonzero(mask).tolist())


def worst_delta_response(
    inst: Instance, p, delta: float, mode: Membership = Membership.STRICT
) -> tuple[int, float]:
    """Worst delta-best response for the principal and its utility Psi(p).

    Ties are broken towards the lowest action index.
    """
    _check_delta(delta)
    p = as_contract(p, inst.m)
    mask = _delta_mask(agent_utilities(inst, p), delta, mode)
    assert mask.any(), "empty delta-best-response set"
    uP = np.where(mask, principal_utilities(inst, p), np.inf)
    a = int(np.argmin(uP))
    return a, float(uP[a])


def psi(inst: Instance, p, delta: float, mode: Membership = Membership.STRICT) -> float:
    return worst_delta_response(inst, p, delta, mode)[1]


def best_responses(inst: Instance, p) -> set[int]:
    uA = agent_utilities(inst, p)
    return set(np.flatnonzero(uA >= uA.max() - TAU_MEM).tolist())


def optimistic_best_response(inst: Instance, p) -> int:
    """Best response a(p) with ties broken in favor of the principal, then by index."""
    p = as_contract(p, inst.m)
    uA = agent_utilities(inst, p)
    tied = uA >= uA.max() - TAU_MEM
    uP = np.where(tied, principal_utilities(inst, p), -np.inf)
    return int(np.argmax(uP))


@dataclass(frozen=True)
class ResponseReport:
    best_value: float
    best_set: frozenset[int]
    optimistic_action: int
    delta_set: frozenset[int]
    worst_delta_action: int
    psi: float


def response_report(
    inst: Instance, p, delta: float, mode: Membership = Membership.STRICT
) -> ResponseReport:
    p = as_contract(p, inst.m)
    a_d, value = worst_delta_response(inst, p, delta, mode)
    return ResponseReport(
        best_value=float(agent_utilities(inst, p).max()),
        best_set=frozenset(best_responses(inst, p)),
        optimistic_action=optimistic_best_response(inst, p),
        delta_set=frozenset(delta_best_responses(inst, p, delta, mode)),
        worst_delta_action=a_d,
        psi=value,
    )


# Batched evaluation over many contracts at once (rows of P).  Used by the
# grid oracle and the learning environment; same semantics as above.

def batch_worst_delta_response(
    F: np.ndarray, r: np.ndarray, c: np.ndarray, P: np.ndarray, delta: float,
    mode: Membership = Membership.STRICT,
) -> tuple[np.ndarray, np.ndarray]:
    pay = P @ F.T
    mask = _delta_mask(pay - c, delta, mode)
    uP = np.where(mask, (F @ r) - pay, np.inf)
    a = np.argmin(uP, axis=1)
    return a, uP[np.arange(len(P)), a]


def batch_optimistic_response(
    F: np.ndarray, r: np.ndarray, c: np.ndarray, P: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    pay = P @ F.T
    uA = pay - c
    tied = uA >= uA.max(axis=1, keepdims=True) - TAU_MEM
    uP = np.where(tied, (F @ r) - pay, -np.inf)
    a = np.argmax(uP, axis=1)
    return a, uP[np.arange(len(P)), a]


@dataclass(frozen=True, eq=False)
class TypedInstance:
    """A finite family of agent types sharing outcomes, rewards and action set.

    ``types[t]`` is the instance seen when the agent has type t (its ``r`` is
    the shared reward vector); ``lam[t]`` is the probability of type t.
    """

    types: tuple[Instance, ...]
    lam: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(self.types))
        object.__setattr__(self, "lam", _frozen(self.lam, 1))

    @classmethod
    def single(cls, inst: Instance) -> "TypedInstance":
        return cls((inst,), [1.0])

    @classmethod
    def from_arrays(cls, Fs, cs, r, lam) -> "TypedInstance":
        return cls(tuple(Instance(F, r, c) for F, c in zip(Fs, cs)), lam)

    @property
    def m(self) -> int:
        return self.types[0].m

    @property
    def n(self) -> int:
        return self.types[0].n

    @property
    def r(self) -> np.ndarray:
        return self.types[0].r


def validate_typed(tinst: TypedInstance) -> ValidationReport:
    rep = ValidationReport()
    if not tinst.types:
        rep.errors.append("no agent types")
        return rep
    lam = tinst.lam
    if lam.shape != (len(tinst.types),):
        rep.errors.append(f"dimension mismatch: {lam.size} type probabilities for {len(tinst.types)} types")
    elif np.any(lam < 0.0) or abs(lam.sum() - 1.0) > ROW_SUM_TOL:
        rep.errors.append(f"type distribution lambda must be nonnegative and sum to 1 (sums to {lam.sum():.12g})")
    first = tinst.types[0]
    for t, inst in enumerate(tinst.types):
        rep.extend(validate_instance(inst), prefix=f"type {t}: ")
        if inst.F.shape != first.F.shape:
            rep.errors.append(f"type {t}: shape {inst.F.shape} differs from type 0 {first.F.shape}")
        elif not np.array_equal(inst.r, first.r):
            rep.errors.append(f"type {t}: reward vector differs from type 0")
    return rep
