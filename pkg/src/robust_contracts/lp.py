"""Small dense linear programs, solved with a Bland's-rule simplex.

The solver works on a condensed (dictionary) tableau: one row per constraint,
one column per nonbasic variable, so a pivot costs O(rows * vars).  Problems
here have few variables (one per outcome) and many constraints (one per
action), which makes this layout much cheaper than a full tableau with
explicit slack columns.

Starting basis is always the all-slack one.  If it is dual feasible
(objective coefficients <= 0) the dual simplex is run directly; if it is
primal feasible the primal simplex is; otherwise a zero-objective dual phase
finds a feasible basis first.  Both entering and leaving choices use
smallest-label tie-breaking, which rules out cycling and makes every solve a
deterministic function of its input.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numba
import numpy as np

TAU_LP = 1e-9
_RATIO_TIE = 1e-12

OPTIMAL, INFEASIBLE, UNBOUNDED, ITERATION_LIMIT = 0, 1, 2, 3


class LpStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


class LpError(RuntimeError):
    """The solver hit its iteration cap or produced an uncertified solution."""


@numba.njit(cache=True, nogil=True)
def _pivot(T, basic, nonbasic, r, s):
    rows, cols = T.shape
    piv = T[r, s]
    for j in range(cols):
        if j != s:
            T[r, j] /= piv
    T[r, s] = 1.0 / piv
    for i in range(rows):
        if i == r:
            continue
        f = T[i, s]
        if f == 0.0:
            continue
        for j in range(cols):
            if j != s:
                T[i, j] -= f * T[r, j]
        T[i, s] = -f / piv
    tmp = basic[r]
    basic[r] = nonbasic[s]
    nonbasic[s] = tmp


@numba.njit(cache=True, nogil=True)
def _primal(T, basic, nonbasic, K, nv, max_iter):
    # row K holds reduced costs d_j; column nv holds basic values
    it = 0
    while it < max_iter:
        s = -1
        for j in range(nv):
            if T[K, j] > TAU_LP and (s < 0 or nonbasic[j] < nonbasic[s]):
                s = j
        if s < 0:
            return OPTIMAL, it
        r = -1
        best = 0.0
        for i in range(K):
            if T[i, s] > TAU_LP:
                ratio = T[i, nv] / T[i, s]
                if r < 0 or ratio < best - _RATIO_TIE:
                    best = ratio
                    r = i
                elif ratio <= best + _RATIO_TIE and basic[i] < basic[r]:
                    r = i
        if r < 0:
            return UNBOUNDED, it
        _pivot(T, basic, nonbasic, r, s)
        it += 1
    return ITERATION_LIMIT, it


@numba.njit(cache=True, nogil=True)
def _dual(T, basic, nonbasic, K, nv, max_iter):
    it = 0
    while it < max_iter:
        r = -1
        for i in range(K):
            if T[i, nv] < -TAU_LP and (r < 0 or basic[i] < basic[r]):
                r = i
        if r < 0:
            return OPTIMAL, it
        s = -1
        best = 0.0
        for j in range(nv):
            if T[r, j] < -TAU_LP:
                ratio = T[K, j] / T[r, j]
                if s < 0 or ratio < best - _RATIO_TIE:
                    best = ratio
                    s = j
                elif ratio <= best + _RATIO_TIE and nonbasic[j] < nonbasic[s]:
                    s = j
        if s < 0:
            return INFEASIBLE, it
        _pivot(T, basic, nonbasic, r, s)
        it += 1
    return ITERATION_LIMIT, it


@numba.njit(cache=True, nogil=True)
def simplex_le(A, b, cost):
    """Maximize cost @ x  s.t.  A @ x <= b,  x >= 0.

    Returns (status, x, iterations).  ``x`` is meaningful only when status is
    OPTIMAL.
    """
    K, nv = A.shape
    T = np.zeros((K + 2, nv + 1))
    for i in range(K):
        for j in range(nv):
            T[i, j] = A[i, j]
        T[i, nv] = b[i]
    for j in range(nv):
        T[K, j] = cost[j]
        T[K + 1, j] = cost[j]
    basic = np.empty(K, np.int64)
    nonbasic = np.empty(nv, np.int64)
    for j in range(nv):
        nonbasic[j] = j
    for i in range(K):
        basic[i] = nv + i
    max_iter = 50 * (K + nv) + 1000

    primal_feasible = True
    for i in range(K):
        if b[i] < -TAU_LP:
            primal_feasible = False
            break
    dual_feasible = True
    for j in range(nv):
        if cost[j] > TAU_LP:
            dual_feasible = False
            break

    total = 0
    if dual_feasible:
        status, it = _dual(T, basic, nonbasic, K, nv, max_iter)
        total += it
    elif primal_feasible:
        status, it = _primal(T, basic, nonbasic, K, nv, max_iter)
        total += it
    else:
        # phase 1: zero objective in row K, true objective carried in row K+1
        for j in range(nv + 1):
            T[K, j] = 0.0
        status, it = _dual(T, basic, nonbasic, K, nv, max_iter)
        total += it
        if status == OPTIMAL:
            for j in range(nv + 1):
                T[K, j] = T[K + 1, j]
            status, it = _primal(T, basic, nonbasic, K, nv, max_iter)
            total += it

    x = np.zeros(nv)
    if status == OPTIMAL:
        for i in range(K):
            if basic[i] < nv:
                v = T[i, nv]
                x[basic[i]] = v if v > 0.0 else 0.0
    return status, x, total


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """maximize objective @ x + offset  s.t.  rows (<= or >=) rhs,  x >= lower.

    Build with :meth:`create`, which checks that every coefficient vector has
    length ``num_vars``.
    """

    objective: np.ndarray
    offset: float
    A: np.ndarray
    relations: tuple[str, ...]
    rhs: np.ndarray
    lower: np.ndarray

    @property
    def num_vars(self) -> int:
        return self.objective.size

    @property
    def num_constraints(self) -> int:
        return len(self.relations)

    @classmethod
    def create(
        cls,
        objective: Sequence[float],
        constraints: Sequence[tuple[Sequence[float], str, float]] = (),
        offset: float = 0.0,
        lower: Sequence[float] | None = None,
    ) -> "LinearProgram":
        obj = np.asarray(objective, dtype=float)
        if obj.ndim != 1 or obj.size == 0:
            raise ValueError("objective must be a nonempty vector")
        nv = obj.size
        rows, rels, rhs = [], [], []
        for k, (coef, rel, b) in enumerate(constraints):
            coef = np.asarray(coef, dtype=float)
            if coef.shape != (nv,):
                raise ValueError(f"constraint {k}: {coef.size} coefficients for {nv} variables")
            if rel not in ("<=", ">="):
                raise ValueError(f"constraint {k}: relation must be '<=' or '>=', got {rel!r}")
            rows.append(coef)
            rels.append(rel)
            rhs.append(float(b))
        A = np.array(rows, dtype=float).reshape(len(rows), nv)
        lb = np.zeros(nv) if lower is None else np.asarray(lower, dtype=float)
        if lb.shape != (nv,):
            raise ValueError("lower bounds must have one entry per variable")
        lp = cls(obj, float(offset), A, tuple(rels), np.array(rhs, dtype=float), lb)
        lp.check()
        return lp

    def check(self) -> None:
        nv = self.num_vars
        if self.A.shape != (len(self.relations), nv) or self.rhs.shape != (len(self.relations),):
            raise ValueError("malformed constraint arrays")
        if any(rel not in ("<=", ">=") for rel in self.relations):
            raise ValueError("relations must be '<=' or '>='")
        for arr in (self.objective, self.A, self.rhs, self.lower):
            if not np.all(np.isfinite(arr)):
                raise ValueError("LP data must be finite")

    def as_le(self) -> tuple[np.ndarray, np.ndarray]:
        """Constraint rows in pure ``<=`` form (``>=`` rows negated)."""
        sign = np.array([1.0 if rel == "<=" else -1.0 for rel in self.relations])
        return self.A * sign[:, None], self.rhs * sign

    def violation(self, x: np.ndarray) -> float:
        """Largest constraint or bound violation of ``x`` (0 when feasible)."""
        A, b = self.as_le()
        worst = float(np.max(self.lower - x, initial=0.0))
        if len(b):
            worst = max(worst, float(np.max(A @ x - b, initial=0.0)))
        return worst


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    x: np.ndarray | None
    value: float | None
    iterations: int = 0


def solve_lp(lp: LinearProgram) -> LpResult:
    """Solve ``lp``; infeasibility and unboundedness are statuses, not errors."""
    lp.check()
    A, b = lp.as_le()
    # substitute x = y + lower so the kernel sees y >= 0
    b = b - A @ lp.lower
    status, y, iters = simplex_le(
        np.ascontiguousarray(A), np.ascontiguousarray(b), np.ascontiguousarray(lp.objective)
    )
    if status == INFEASIBLE:
        return LpResult(LpStatus.INFEASIBLE, None, None, iters)
    if status == UNBOUNDED:
        return LpResult(LpStatus.UNBOUNDED, None, None, iters)
    if status == ITERATION_LIMIT:
        raise LpError(f"simplex hit its iteration limit after {iters} pivots")
    x = y + lp.lower
    scale = 1.0 + float(np.max(np.abs(x), initial=0.0))
    if lp.violation(x) > TAU_LP * scale:
        raise LpError(f"solution violates constraints by {lp.violation(x):.3g}")
    return LpResult(LpStatus.OPTIMAL, x, float(lp.objective @ x) + lp.offset, iters)
