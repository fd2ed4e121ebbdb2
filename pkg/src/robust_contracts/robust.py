"""Exact optimal delta-robust contracts.

For a guessed pair (a_star, a_delta) -- the agent's exact best response and
its worst delta-best response -- a contract p is a candidate when every action
``a`` is either no delta-best response or no worse than ``a_delta`` for the
principal:

    F_a.p <= c_a + uA(p, a_star) - delta          (agent side)
 or F_a.p <= F_a.r - uP(p, a_delta)               (principal side)

The larger right-hand side wins, and which one is larger depends only on how
the welfare ``nu_a = F_a.r - c_a`` compares with the contract-dependent level
``L(p) = uA(p, a_star) + uP(p, a_delta) - delta``.  Sorting actions by welfare
splits contract space into n+1 slabs ``nu_{j-1} <= L(p) <= nu_j``; inside slab
j the actions below the slab (positions < j) take the agent-side inequality
and the rest take the principal-side one, so each slab is a single LP.

Enumerating all n^2 pairs and n+1 slabs, and keeping the LP optimum with the
largest re-evaluated robust utility Psi, gives an optimal contract.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np

from .lp import (
    INFEASIBLE,
    ITERATION_LIMIT,
    OPTIMAL,
    TAU_LP,
    UNBOUNDED,
    LinearProgram,
    LpStatus,
    simplex_le,
    solve_lp,
)
from .model import TAU_MEM, Instance, _check_delta, worst_delta_response


class RobustSolverError(RuntimeError):
    """Raised when the enumeration contradicts the theory (no feasible or an unbounded LP)."""


@dataclass(frozen=True, eq=False)
class WelfareOrder:
    """Actions sorted ascending by welfare, ties by original index.

    ``perm[k]`` is the action at (1-based) position k+1, ``position[a]`` the
    1-based position of action ``a``.
    """

    perm: np.ndarray
    values: np.ndarray
    position: np.ndarray

    @property
    def n(self) -> int:
        return self.perm.size

    def nu(self, j: int) -> float:
        """nu_j for j in 0..n+1, with nu_0 = -inf and nu_{n+1} = +inf."""
        if j <= 0:
            return -math.inf
        if j > self.n:
            return math.inf
        return float(self.values[j - 1])


def welfare_order(inst: Instance) -> WelfareOrder:
    nu = inst.welfare
    perm = np.argsort(nu, kind="stable")
    position = np.empty(inst.n, dtype=np.int64)
    position[perm] = np.arange(1, inst.n + 1)
    return WelfareOrder(perm.astype(np.int64), nu[perm], position)


@numba.njit(cache=True, nogil=True)
def _subproblem_rows(F, R, c, perm, nu_sorted, a_star, a_delta, j, delta):
    """Rows of slab LP j in ``<=`` form, plus objective and constant.

    Row layout: [upper slab bound if j <= n] [lower slab bound if j >= 2]
    then one row per action in welfare order.
    """
    n, m = F.shape
    K = n + (1 if j <= n else 0) + (1 if j >= 2 else 0)
    A = np.empty((K, m))
    b = np.empty(K)
    k0 = -c[a_star] + R[a_delta] - delta
    row = 0
    if j <= n:
        for w in range(m):
            A[row, w] = F[a_star, w] - F[a_delta, w]
        b[row] = nu_sorted[j - 1] - k0
        row += 1
    if j >= 2:
        for w in range(m):
            A[row, w] = -(F[a_star, w] - F[a_delta, w])
        b[row] = k0 - nu_sorted[j - 2]
        row += 1
    for pos in range(1, n + 1):
        a = perm[pos - 1]
        if pos <= j - 1:
            for w in range(m):
                A[row, w] = F[a, w] - F[a_star, w]
            b[row] = c[a] - c[a_star] - delta
        else:
            for w in range(m):
                A[row, w] = F[a, w] - F[a_delta, w]
            b[row] = R[a] - R[a_delta]
        row += 1
    cost = -F[a_delta]
    return A, b, cost, R[a_delta]


@numba.njit(cache=True, nogil=True)
def _psi(F, R, c, p, delta):
    n, m = F.shape
    pay = np.empty(n)
    best = -np.inf
    for a in range(n):
        s = 0.0
        for w in range(m):
            s += F[a, w] * p[w]
        pay[a] = s
        if s - c[a] > best:
            best = s - c[a]
    worst = np.inf
    for a in range(n):
        if pay[a] - c[a] - (best - delta) > TAU_MEM:
            u = R[a] - pay[a]
            if u < worst:
                worst = u
    return worst


@numba.njit(cache=True, nogil=True)
def _enumerate_pairs(F, R, c, perm, nu_sorted, delta, lo, hi):
    """Scan pair indices [lo, hi) (pair k = (k // n, k % n)) over all slabs.

    Returns the first candidate with the largest Psi in enumeration order,
    plus LP status counts.
    """
    n, m = F.shape
    best_psi = -np.inf
    best_p = np.zeros(m)
    best_pair = (-1, -1)
    best_j = -1
    best_val = np.nan
    counts = np.zeros(4, np.int64)
    for k in range(lo, hi):
        a_star = k // n
        a_delta = k % n
        for j in range(1, n + 2):
            A, b, cost, const = _subproblem_rows(F, R, c, perm, nu_sorted, a_star, a_delta, j, delta)
            status, x, _ = simplex_le(A, b, cost)
            counts[status] += 1
            if status != OPTIMAL:
                continue
            val = const
            for w in range(m):
                val += cost[w] * x[w]
            ps = _psi(F, R, c, x, delta)
            if ps > best_psi:
                best_psi = ps
                best_p = x.copy()
                best_pair = (a_star, a_delta)
                best_j = j
                best_val = val
    return best_psi, best_p, best_pair[0], best_pair[1], best_j, best_val, counts


def build_subproblem(
    inst: Instance, a_star: int, a_delta: int, j: int, delta: float,
    order: WelfareOrder | None = None,
) -> LinearProgram:
    """Slab LP ``j`` (1..n+1) for the guessed pair, over payments p >= 0.

    The lower slab bound is expressed as a ``>=`` row; everything else is
    ``<=``.  Solving this LP with :func:`solve_lp` reproduces bit for bit the
    solve done inside :func:`solve_robust`.
    """
    _check_delta(delta)
    n = inst.n
    if not 1 <= j <= n + 1:
        raise ValueError(f"partition index j must lie in 1..{n + 1}, got {j}")
    order = order or welfare_order(inst)
    A, b, cost, const = _subproblem_rows(
        np.ascontiguousarray(inst.F), inst.expected_rewards, inst.c,
        order.perm, order.values, a_star, a_delta, j, delta,
    )
    relations = ["<="] * len(b)
    if j >= 2:
        lower_row = 1 if j <= n else 0
        A[lower_row] = -A[lower_row]
        b[lower_row] = -b[lower_row]
        relations[lower_row] = ">="
    return LinearProgram.create(
        cost, [(A[i], relations[i], b[i]) for i in range(len(b))], offset=float(const)
    )


@dataclass(frozen=True, eq=False)
class RobustSolution:
    contract: np.ndarray
    psi: float
    a_star: int
    a_delta: int
    partition_index: int
    lp_value: float
    delta: float
    lp_counts: dict

    @property
    def pair(self) -> tuple[int, int]:
        return self.a_star, self.a_delta

    def as_dict(self) -> dict:
        return {
            "delta": self.delta,
            "psi": self.psi,
            "contract": [float(v) for v in self.contract],
            "a_star": self.a_star,
            "a_delta": self.a_delta,
            "partition_index": self.partition_index,
            "lp_value": self.lp_value,
            "lp_counts": dict(self.lp_counts),
        }


def _pair_chunks(n: int, chunk: int):
    total = n * n
    return [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]


def solve_robust(inst: Instance, delta: float, threads: int = 1, chunk: int = 64) -> RobustSolution:
    """Optimal delta-robust contract by exhaustive (pair, slab) enumeration.

    Pairs are scanned in (a_star, a_delta) order and slabs in ascending j; a
    candidate replaces the incumbent only if its Psi is strictly larger.  Work
    is split into fixed chunks of pairs that are reduced in chunk order, so the
    result does not depend on ``threads``.
    """
    _check_delta(delta)
    if threads < 1:
        raise ValueError("threads must be >= 1")
    F = np.ascontiguousarray(inst.F)
    R = np.ascontiguousarray(inst.expected_rewards)
    c = np.ascontiguousarray(inst.c)
    order = welfare_order(inst)

    def run(bounds):
        return _enumerate_pairs(F, R, c, order.perm, order.values, float(delta), *bounds)

    chunks = _pair_chunks(inst.n, chunk)
    if threads == 1:
        results = [run(b) for b in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, chunks))

    counts = np.zeros(4, np.int64)
    best = None
    for res in results:
        counts += res[6]
        if res[4] > 0 and (best is None or res[0] > best[0]):
            best = res
    lp_counts = {
        LpStatus.OPTIMAL.value: int(counts[OPTIMAL]),
        LpStatus.INFEASIBLE.value: int(counts[INFEASIBLE]),
        LpStatus.UNBOUNDED.value: int(counts[UNBOUNDED]),
        "IterationLimit": int(counts[ITERATION_LIMIT]),
    }
    if counts[UNBOUNDED] or counts[ITERATION_LIMIT]:
        raise RobustSolverError(f"unexpected LP outcome during enumeration: {lp_counts}")
    if best is None:
        raise RobustSolverError("every subproblem LP was infeasible")

    _, p, a_star, a_delta, j, lp_value, _ = best
    p = np.array(p)
    _, value = worst_delta_response(inst, p, delta)
    return RobustSolution(
        contract=p, psi=value, a_star=int(a_star), a_delta=int(a_delta),
        partition_index=int(j), lp_value=float(lp_value), delta=float(delta),
        lp_counts=lp_counts,
    )


def solve_robust_reference(inst: Instance, delta: float) -> RobustSolution:
    """Same enumeration as :func:`solve_robust`, one :class:`LinearProgram` at a time.

    Slow; kept as a readable cross-check of the compiled path.
    """
    _check_delta(delta)
    order = welfare_order(inst)
    best = None
    counts = {s.value: 0 for s in LpStatus}
    for a_star in range(inst.n):
        for a_delta in range(inst.n):
            for j in range(1, inst.n + 2):
                lp = build_subproblem(inst, a_star, a_delta, j, delta, order)
                res = solve_lp(lp)
                counts[res.status.value] += 1
                if res.status is LpStatus.UNBOUNDED:
                    raise RobustSolverError("unbounded subproblem")
                if res.status is not LpStatus.OPTIMAL:
                    continue
                _, value = worst_delta_response(inst, res.x, delta)
                if best is None or value > best.psi:
                    best = RobustSolution(
                        res.x, value, a_star, a_delta, j, res.value, float(delta), counts
                    )
    if best is None:
        raise RobustSolverError("every subproblem LP was infeasible")
    return best


def certificate_violation(inst: Instance, sol: RobustSolution) -> float:
    """Constraint violation of the returned contract in its own slab LP."""
    lp = build_subproblem(inst, sol.a_star, sol.a_delta, sol.partition_index, sol.delta)
    return lp.violation(sol.contract)


__all__ = [
    "RobustSolution",
    "RobustSolverError",
    "WelfareOrder",
    "build_subproblem",
    "certificate_violation",
    "solve_robust",
    "solve_robust_reference",
    "welfare_order",
    "TAU_LP",
]
