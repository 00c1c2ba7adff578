"""Pure-Python bitset kernels.

Graphs are passed as a list ``adj`` of neighbour bitmasks (vertex i is bit i).
The compiled module ``_kernels`` implements the same algorithms with the same
branching order, so both backends return identical results.
"""
from __future__ import annotations

BACKEND = "python"


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(mask):
    return bin(mask).count("1")


def maximal_cliques(adj, n):
    """Bron-Kerbosch with Tomita pivoting. Returns clique bitmasks."""
    out = []

    def expand(r, p, x):
        if not p and not x:
            out.append(r)
            return
        best, pivot = -1, -1
        for u in _bits(p | x):
            c = _popcount(p & adj[u])
            if c > best:
                best, pivot = c, u
        for v in _bits(p & ~adj[pivot]):
            bit = 1 << v
            expand(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit

    if n:
        expand(0, (1 << n) - 1, 0)
    return out


def k_colour(adj, n, k, precolour):
    """DSATUR-ordered backtracking for a proper colouring with at most k colours.

    ``precolour`` is a list of (vertex, colour) pairs fixed before search
    (used for clique symmetry breaking). Returns (colours or None, nodes).
    """
    colour = [-1] * n
    cnt = [[0] * k for _ in range(n)]
    sat = [0] * n
    deg = [_popcount(a) for a in adj]
    nodes = 0

    def assign(v, c):
        colour[v] = c
        for u in _bits(adj[v]):
            cnt[u][c] += 1
            if cnt[u][c] == 1:
                sat[u] += 1

    def unassign(v, c):
        colour[v] = -1
        for u in _bits(adj[v]):
            cnt[u][c] -= 1
            if cnt[u][c] == 0:
                sat[u] -= 1

    top = -1
    for v, c in precolour:
        if c >= k or colour[v] != -1 or cnt[v][c]:
            return None, 0
        assign(v, c)
        top = max(top, c)
    remaining = sum(1 for v in range(n) if colour[v] == -1)

    def search(remaining, top):
        nonlocal nodes
        nodes += 1
        if remaining == 0:
            return True
        pick, ps, pd = -1, -1, -1
        for v in range(n):
            if colour[v] == -1 and (sat[v] > ps or (sat[v] == ps and deg[v] > pd)):
                pick, ps, pd = v, sat[v], deg[v]
        if ps >= k:
            return False
        limit = min(top + 2, k)
        for c in range(limit):
            if cnt[pick][c]:
                continue
            assign(pick, c)
            if search(remaining - 1, max(top, c)):
                return True
            unassign(pick, c)
        return False

    if search(remaining, top):
        return list(colour), nodes
    return None, nodes


def greedy_dsatur(adj, n):
    """One DSATUR pass without backtracking; returns a proper colouring."""
    colour = [-1] * n
    used = [0] * n
    deg = [_popcount(a) for a in adj]
    for _ in range(n):
        pick, ps, pd = -1, -1, -1
        for v in range(n):
            if colour[v] == -1:
                s = _popcount(used[v])
                if s > ps or (s == ps and deg[v] > pd):
                    pick, ps, pd = v, s, deg[v]
        c = 0
        while used[pick] >> c & 1:
            c += 1
        colour[pick] = c
        for u in _bits(adj[pick]):
            used[u] |= 1 << c
    return colour


def valuations(adj, n, cliques, cap):
    """Independent sets meeting every clique mask exactly once.

    Returns (list of masks, truncated flag). Stops after cap+1 hits.
    """
    m = len(cliques)
    member = [0] * n
    for j, c in enumerate(cliques):
        for v in _bits(c):
            member[v] |= 1 << j
    out = []

    def search(chosen, avail, unsat):
        if len(out) > cap:
            return
        if not unsat:
            out.append(chosen)
            return
        best, bcount = -1, n + 1
        for j in _bits(unsat):
            c = _popcount(cliques[j] & avail)
            if c < bcount:
                best, bcount = j, c
                if c == 0:
                    return
        for v in _bits(cliques[best] & avail):
            search(chosen | (1 << v), avail & ~adj[v] & ~(1 << v), unsat & ~member[v])
            if len(out) > cap:
                return

    if m:
        search(0, (1 << n) - 1, (1 << m) - 1)
    else:
        out.append(0)
    if len(out) > cap:
        return out[:cap], True
    return out, False
