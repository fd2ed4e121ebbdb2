"""Brute-force grid references for robust and non-robust contract values."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import (
    Instance,
    TypedInstance,
    _check_delta,
    batch_optimistic_response,
    batch_worst_delta_response,
)

MAX_GRID_POINTS = 10**7
_CHUNK = 1 << 15


class GridCapError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Uniform lattice {0, h, 2h, ...} per coordinate, closed with ``upper``."""

    step: float
    upper: float = 1.0

    def __post_init__(self):
        if not self.step > 0.0:
            raise ValueError(f"grid step must be positive, got {self.step}")
        if not self.upper > 0.0:
            raise ValueError(f"grid upper bound must be positive, got {self.upper}")

    def levels(self) -> np.ndarray:
        k = int(np.floor(self.upper / self.step + 1e-9))
        lv = np.arange(k + 1) * self.step
        lv = lv[lv <= self.upper + 1e-12]
        lv[-1] = min(lv[-1], self.upper)
        if lv[-1] < self.upper - 1e-12:
            lv = np.append(lv, self.upper)
        return lv

    def size(self, m: int) -> int:
        return len(self.levels()) ** m

    def check(self, m: int) -> None:
        if self.size(m) > MAX_GRID_POINTS:
            raise GridCapError(
                f"grid with step {self.step} has {self.size(m)} points in dimension {m}, "
                f"cap is {MAX_GRID_POINTS}"
            )

    def points(self, m: int, lo: int = 0, hi: int | None = None) -> np.ndarray:
        """Grid points ``lo:hi`` in lexicographic order (first coordinate slowest)."""
        lv = self.levels()
        hi = self.size(m) if hi is None else hi
        idx = np.unravel_index(np.arange(lo, hi), (len(lv),) * m)
        return np.column_stack([lv[i] for i in idx]) if m else np.zeros((hi - lo, 0))


def _grid_argmax(
    grid: GridSpec, m: int, evaluate: Callable[[np.ndarray], np.ndarray], threads: int = 1
) -> tuple[np.ndarray, float]:
    grid.check(m)
    total = grid.size(m)
    bounds = [(lo, min(lo + _CHUNK, total)) for lo in range(0, total, _CHUNK)]

    def scan(b):
        P = grid.points(m, *b)
        vals = evaluate(P)
        k = int(np.argmax(vals))
        return P[k], float(vals[k])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(scan, bounds))
    else:
        results = [scan(b) for b in bounds]
    best_p, best_v = results[0]
    for p, v in results[1:]:
        if v > best_v:
            best_p, best_v = p, v
    return np.array(best_p), best_v


def grid_psi_max(inst: Instance, delta: float, grid: GridSpec, threads: int = 1):
    """First grid contract (lexicographic) maximizing Psi, and that maximum."""
    _check_delta(delta)
    F, r, c = inst.F, inst.r, inst.c
    return _grid_argmax(
        grid, inst.m, lambda P: batch_worst_delta_response(F, r, c, P, delta)[1], threads
    )


def typed_robust_values(tinst: TypedInstance, P: np.ndarray, delta: float) -> np.ndarray:
    """sum_t lam_t uP(p, worst delta-response of type t) for each row p of P."""
    total = np.zeros(len(P))
    for lam, inst in zip(tinst.lam, tinst.types):
        total += lam * batch_worst_delta_response(inst.F, inst.r, inst.c, P, delta)[1]
    return total


def typed_nonrobust_values(tinst: TypedInstance, P: np.ndarray) -> np.ndarray:
    """sum_t lam_t uP(p, optimistic best response of type t) for each row p of P."""
    total = np.zeros(len(P))
    for lam, inst in zip(tinst.lam, tinst.types):
        total += lam * batch_optimistic_response(inst.F, inst.r, inst.c, P)[1]
    return total


def grid_opt_typed(tinst: TypedInstance, delta: float, grid: GridSpec, threads: int = 1):
    """Grid approximation of OPT(C, delta) over the contract box."""
    _check_delta(delta)
    return _grid_argmax(grid, tinst.m, lambda P: typed_robust_values(tinst, P, delta), threads)


def grid_opt_typed_nonrobust(tinst: TypedInstance, grid: GridSpec, threads: int = 1):
    """Grid approximation of OPT(C) (exact, principal-favoring best responses)."""
    return _grid_argmax(grid, tinst.m, lambda P: typed_nonrobust_values(tinst, P), threads)
