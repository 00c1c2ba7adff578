"""Dimension functions: positive integers on vertices summing to d on every
maximal clique.

The homogeneous system has one unknown per vertex plus d. Its rational
structure is read off a Hermite normal form; the integer search is a
backtracking sweep over d with clique-sum propagation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import exact_lp
from .errors import CapExceeded, NoSolution, NoSolutionUpTo
from .exact import qdiv


@dataclass(frozen=True)
class DimSolution:
    d: int
    dims: dict = field(hash=False)

    def to_json(self):
        return {"d": self.d, "dims": dict(sorted(self.dims.items()))}


def hermite_normal_form(rows):
    """Row-style HNF of an integer matrix.

    Returns (H, U) with H = U*A, U unimodular, H in echelon form with positive
    pivots and entries above each pivot reduced into [0, pivot). Zero rows are
    kept at the bottom.
    """
    A = [list(map(int, r)) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for j in range(n):
        if r >= m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][j] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][j]))
            A[r], A[p] = A[p], A[r]
            U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, m):
                if A[i][j]:
                    q = A[i][j] // A[r][j]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if A[i][j]:
                        done = False
            if done:
                break
        if all(A[i][j] == 0 for i in range(r, m)):
            continue
        if A[r][j] < 0:
            A[r] = [-a for a in A[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            q = A[i][j] // A[r][j]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return A, U


def hnf_rank(rows):
    H, _ = hermite_normal_form(rows)
    return sum(1 for r in H if any(r))


def _system(vertices, max_cliques, equalities):
    idx = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    rows = []
    for c in max_cliques:
        row = [0] * (n + 1)
        for v in c:
            row[idx[v]] += 1
        row[n] = -1
        rows.append(row)
    for left, right in equalities:
        row = [0] * (n + 1)
        for v in left:
            row[idx[v]] += 1
        for v in right:
            row[idx[v]] -= 1
        if any(row):
            rows.append(row)
    return rows


def forced_zero_variables(vertices, max_cliques, equalities=()):
    """Vertices that vanish in every rational solution (e_v lies in the row space)."""
    rows = _system(vertices, max_cliques, equalities)
    if not rows:
        return []
    base = hnf_rank(rows)
    n = len(vertices)
    out = []
    for i, v in enumerate(vertices):
        unit = [0] * (n + 1)
        unit[i] = 1
        if hnf_rank(rows + [unit]) == base:
            out.append(v)
    return out


def _lp_feasible(vertices, max_cliques, equalities, d):
    """Rational solution with every dim >= 1 at this d (substituting x = y + 1)."""
    idx = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    A, b = [], []
    for c in max_cliques:
        row = [0] * n
        for v in c:
            row[idx[v]] += 1
        A.append(row)
        b.append(d - len(c))
    for left, right in equalities:
        row = [0] * n
        for v in left:
            row[idx[v]] += 1
        for v in right:
            row[idx[v]] -= 1
        A.append(row)
        b.append(len(right) - len(left))
    if not A:
        return True
    return exact_lp.solve([0] * n, A, b).status == exact_lp.OPTIMAL


def _search(vertices, max_cliques, equalities, d, cap):
    """All solutions at fixed d in lexicographic order, stopping after cap+1."""
    idx = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    cl = [[idx[v] for v in c] for c in max_cliques]
    of = [[] for _ in range(n)]
    for k, c in enumerate(cl):
        for i in c:
            of[i].append(k)
    eqs = [([idx[v] for v in l], [idx[v] for v in r]) for l, r in equalities]
    eq_last = [[] for _ in range(n)]
    for e, (l, r) in enumerate(eqs):
        if l or r:
            eq_last[max(l + r)].append(e)
    total = [0] * len(cl)
    left = [len(c) for c in cl]
    val = [0] * n
    out = []

    def rec(i):
        if len(out) > cap:
            return
        if i == n:
            out.append(list(val))
            return
        hi = d
        lo = 1
        for k in of[i]:
            hi = min(hi, d - total[k] - (left[k] - 1))
            if left[k] == 1:
                lo = max(lo, d - total[k])
        if not of[i]:
            hi = lo
        for x in range(lo, hi + 1):
            val[i] = x
            ok = all(sum(val[j] for j in eqs[e][0]) == sum(val[j] for j in eqs[e][1]) for e in eq_last[i])
            if not ok:
                continue
            for k in of[i]:
                total[k] += x
                left[k] -= 1
            rec(i + 1)
            for k in of[i]:
                total[k] -= x
                left[k] += 1
            if len(out) > cap:
                return
        val[i] = 0

    rec(0)
    return out


def _omega(max_cliques):
    return max((len(c) for c in max_cliques), default=0)


def solve_dimension_function(g, max_cliques, d_max, equalities=(), d_min=None):
    """Dimension function with the least d (lexicographically least dims), or raise."""
    vertices = list(g.vertices)
    cliques = [tuple(c) for c in max_cliques]
    zeros = forced_zero_variables(vertices, cliques, equalities)
    if zeros:
        raise NoSolution(f"vertices {zeros} are forced to 0 by the clique equations")
    start = max(_omega(cliques), 1) if d_min is None else d_min
    for d in range(start, d_max + 1):
        if not _lp_feasible(vertices, cliques, equalities, d):
            continue
        sols = _search(vertices, cliques, equalities, d, 0)
        if sols:
            return DimSolution(d, dict(zip(vertices, sols[0])))
    raise NoSolutionUpTo(d_max)


def all_dimension_functions(g, max_cliques, d, cap=100_000, equalities=()):
    vertices = list(g.vertices)
    cliques = [tuple(c) for c in max_cliques]
    if not _lp_feasible(vertices, cliques, equalities, d):
        return []
    sols = _search(vertices, cliques, equalities, d, cap)
    if len(sols) > cap:
        raise CapExceeded(cap)
    return [DimSolution(d, dict(zip(vertices, s))) for s in sols]


def is_dimension_function(max_cliques, sol: DimSolution, equalities=()):
    dims = sol.dims
    if any(k < 1 for k in dims.values()):
        return False
    if any(sum(dims[v] for v in c) != sol.d for c in max_cliques):
        return False
    return all(sum(dims[v] for v in l) == sum(dims[v] for v in r) for l, r in equalities)


def maximally_mixed_weights(g, max_cliques, equalities=()):
    """Strictly positive rational weights with every clique summing to 1, or None.

    Solves x >= 1, clique sums all equal to a free D, then divides by D.
    """
    vertices = list(g.vertices)
    n = len(vertices)
    rows = _system(vertices, max_cliques, equalities)
    if not rows:
        return {v: Fraction(1) for v in vertices}
    # shift x = y + 1 so that y >= 0; D stays >= 0
    A, b = [], []
    for row in rows:
        A.append(row)
        b.append(-sum(row[:n]))
    res = exact_lp.solve([0] * n + [1], A, b)
    if res.status != exact_lp.OPTIMAL:
        return None
    x = [v + 1 for v in res.x[:n]]
    D = res.x[n]
    if D == 0:
        return None
    return {v: qdiv(x[i], D) for i, v in enumerate(vertices)}


def scenario_equalities(s):
    """Equal-dimension constraints between representations of each declared event."""
    eqs = []
    for name in s.events:
        holders = [i for i in range(s.n_contexts) if s.rep(name, i) is not None]
        for a, b in zip(holders, holders[1:]):
            ra, rb = s.rep(name, a), s.rep(name, b)
            if ra != rb:
                eqs.append((tuple(sorted(ra)), tuple(sorted(rb))))
    return eqs


def scenario_dimension_function(s, d_max=None):
    from .algebra_core import context_cliques, exclusivity_graph
    g = exclusivity_graph(s)
    cliques = context_cliques(s)
    eqs = scenario_equalities(s)
    if s.d is not None:
        return solve_dimension_function(g, cliques, s.d, eqs, d_min=s.d)
    if d_max is None:
        d_max = max(4 * _omega(cliques), 16)
    return solve_dimension_function(g, cliques, d_max, eqs)


def scenario_with_dims(s, d_max=None):
    """The scenario itself if it carries dims, else with the minimal dimension function."""
    if s.dim is not None:
        return s
    from .errors import NoDimensionFunction
    try:
        sol = scenario_dimension_function(s, d_max)
    except NoSolutionUpTo as exc:
        raise NoDimensionFunction(str(exc)) from exc
    return s.with_dims(sol.dims, sol.d)
