"""Two-phase simplex over exact rationals (Bland's rule, so it never cycles)."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import qdiv

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list = field(default_factory=list)
    value: Fraction | None = None


def _pivot(T, basis, r, j):
    inv = qdiv(1, T[r][j])
    row = T[r]
    for k in range(len(row)):
        row[k] *= inv
    for i, other in enumerate(T):
        if i != r and other[j]:
            f = other[j]
            for k in range(len(row)):
                if row[k]:
                    other[k] -= f * row[k]
    basis[r] = j


def _run(T, basis, cost, allowed):
    """Minimise cost over the tableau; returns False if unbounded."""
    if not T:
        return all(cost[j] >= 0 for j in allowed)
    rhs = len(T[0]) - 1
    while True:
        entering = None
        for j in allowed:
            if j in basis:
                continue
            rc = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(len(T)) if T[i][j])
            if rc < 0:
                entering = j
                break
        if entering is None:
            return True
        leave, best = None, None
        for i in range(len(T)):
            a = T[i][entering]
            if a > 0:
                ratio = T[i][rhs] * qdiv(1, a)
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            return False
        _pivot(T, basis, leave, entering)


def solve(c, A_eq, b_eq, maximize=False) -> LPResult:
    """Optimise c.x subject to A_eq x = b_eq, x >= 0, exactly."""
    n = len(c)
    m = len(A_eq)
    c = [Fraction(v) for v in c]
    if maximize:
        c = [-v for v in c]
    T = []
    for i in range(m):
        row = [Fraction(v) for v in A_eq[i]]
        b = Fraction(b_eq[i])
        if b < 0:
            row = [-v for v in row]
            b = -b
        T.append(row + [Fraction(int(k == i)) for k in range(m)] + [b])
    basis = [n + i for i in range(m)]
    cost1 = [Fraction(0)] * n + [Fraction(1)] * m
    _run(T, basis, cost1, range(n + m))
    rhs = n + m
    if any(basis[i] >= n and T[i][rhs] != 0 for i in range(len(T))):
        return LPResult(INFEASIBLE)
    i = 0
    while i < len(T):
        if basis[i] >= n:
            j = next((j for j in range(n) if T[i][j] != 0), None)
            if j is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, j)
        i += 1
    cost2 = c + [Fraction(0)] * m
    if not _run(T, basis, cost2, range(n)):
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = T[i][rhs]
    value = sum((cv * xv for cv, xv in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, x, -value if maximize else value)


def convex_combination(columns, target):
    """Nonnegative weights summing to 1 with sum_k w_k columns[k] == target, or None."""
    if not columns:
        return None
    dim = len(target)
    A = [[col[r] for col in columns] for r in range(dim)]
    A.append([1] * len(columns))
    b = list(target) + [1]
    res = solve([0] * len(columns), A, b)
    if res.status != OPTIMAL:
        return None
    return res.x
