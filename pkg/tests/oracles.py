"""Slow reference implementations, deliberately free of package code."""
from fractions import Fraction
from itertools import combinations, product


def dot(x, y):
    return sum(a * b for a, b in zip(x, y))


def utilities(F, r, c, p):
    uA = [dot(F[a], p) - c[a] for a in range(len(F))]
    uP = [dot(F[a], r) - dot(F[a], p) for a in range(len(F))]
    return uA, uP


def worst_response(F, r, c, p, delta, tol=1e-7):
    """(action, principal utility): strict delta-set, lowest index on ties."""
    uA, uP = utilities(F, r, c, p)
    best = max(uA)
    cand = [a for a in range(len(F)) if uA[a] - (best - delta) > tol]
    a = min(cand, key=lambda k: (uP[k], k))
    return a, uP[a]


def optimistic_response(F, r, c, p):
    uA, uP = utilities(F, r, c, p)
    best = max(uA)
    cand = [a for a in range(len(F)) if uA[a] == best]
    return min(cand, key=lambda k: (-uP[k], k))


def grid_levels(step, upper=1.0):
    k = 0
    out = []
    while k * step <= upper + 1e-12:
        out.append(min(k * step, upper))
        k += 1
    if out[-1] < upper - 1e-12:
        out.append(upper)
    return out


def grid_scan(value, m, step):
    """First lexicographic maximizer of ``value`` over the grid."""
    best_p, best_v = None, None
    for p in product(grid_levels(step), repeat=m):
        v = value(list(p))
        if best_v is None or v > best_v:
            best_p, best_v = list(p), v
    return best_p, best_v


def _solve_square(M, b):
    """Gauss-Jordan over Fractions; None if singular."""
    n = len(M)
    A = [row[:] + [bi] for row, bi in zip(M, b)]
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        for i in range(n):
            if i != col and A[i][col] != 0:
                f = A[i][col] / A[col][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    return [A[i][n] / A[i][i] for i in range(n)]


def _box_max(cost, A, b, big):
    nv = len(cost)
    rows = A + [[Fraction(-1 if i == k else 0) for i in range(nv)] for k in range(nv)]
    rows += [[Fraction(1 if i == k else 0) for i in range(nv)] for k in range(nv)]
    rhs = b + [Fraction(0)] * nv + [big] * nv
    best = None
    for idx in combinations(range(len(rows)), nv):
        x = _solve_square([rows[i] for i in idx], [rhs[i] for i in idx])
        if x is None:
            continue
        if all(dot(row, x) <= r for row, r in zip(rows, rhs)):
            v = dot(cost, x)
            if best is None or v > best:
                best = v
    return best


def lp_vertex_max(cost, A, b):
    """max cost.x s.t. A x <= b, x >= 0 by exact vertex enumeration.

    Returns (status, value).  The LP is boxed at two sizes; if the optimum
    moves with the box, the LP is unbounded.
    """
    cost = [Fraction(v) for v in cost]
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    small = _box_max(cost, A, b, Fraction(10**6))
    if small is None:
        return "Infeasible", None
    if _box_max(cost, A, b, Fraction(2 * 10**6)) != small:
        return "Unbounded", None
    return "Optimal", small
