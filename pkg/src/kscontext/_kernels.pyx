# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bitset kernels (graphs with at most 64 vertices).

Same algorithms and branching order as ``_kernels_py``; larger graphs are
delegated to the pure-Python module.
"""
from libc.stdlib cimport malloc, free
from libc.string cimport memset

from . import _kernels_py

ctypedef unsigned long long u64

BACKEND = "cython"
cdef int WORD = 64


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int popc(u64 x) nogil:
    return __builtin_popcountll(x)


cdef inline int lowbit(u64 x) nogil:
    return __builtin_ctzll(x)


cdef inline u64 bit(int i) nogil:
    return (<u64>1) << i


cdef inline u64 _full(int n) nogil:
    if n >= 64:
        return ~(<u64>0)
    return bit(n) - 1


# ---------------------------------------------------------------- cliques

cdef void _bk(u64* adj, u64 r, u64 p, u64 x, list out):
    cdef u64 px, cand, b
    cdef int u, v, c, best, pivot
    if p == 0 and x == 0:
        out.append(r)
        return
    best = -1
    pivot = -1
    px = p | x
    while px:
        u = lowbit(px)
        px &= px - 1
        c = popc(p & adj[u])
        if c > best:
            best = c
            pivot = u
    cand = p & ~adj[pivot]
    while cand:
        v = lowbit(cand)
        cand &= cand - 1
        b = bit(v)
        _bk(adj, r | b, p & adj[v], x & adj[v], out)
        p &= ~b
        x |= b


def maximal_cliques(adj, int n):
    if n > WORD:
        return _kernels_py.maximal_cliques(adj, n)
    cdef u64 a[64]
    cdef int i
    for i in range(n):
        a[i] = <u64>adj[i]
    out = []
    if n:
        _bk(a, 0, _full(n), 0, out)
    return [int(m) for m in out]


# ---------------------------------------------------------------- colouring

cdef struct ColState:
    int n
    int k
    u64* adj
    int* colour
    int* cnt
    int* sat
    int* deg
    long long nodes


cdef inline void _assign(ColState* s, int v, int c) nogil:
    cdef u64 m = s.adj[v]
    cdef int u
    s.colour[v] = c
    while m:
        u = lowbit(m)
        m &= m - 1
        s.cnt[u * s.k + c] += 1
        if s.cnt[u * s.k + c] == 1:
            s.sat[u] += 1


cdef inline void _unassign(ColState* s, int v, int c) nogil:
    cdef u64 m = s.adj[v]
    cdef int u
    s.colour[v] = -1
    while m:
        u = lowbit(m)
        m &= m - 1
        s.cnt[u * s.k + c] -= 1
        if s.cnt[u * s.k + c] == 0:
            s.sat[u] -= 1


cdef bint _search(ColState* s, int remaining, int top) nogil:
    cdef int v, pick, ps, pd, c, limit, nt
    s.nodes += 1
    if remaining == 0:
        return True
    pick = -1
    ps = -1
    pd = -1
    for v in range(s.n):
        if s.colour[v] == -1 and (s.sat[v] > ps or (s.sat[v] == ps and s.deg[v] > pd)):
            pick = v
            ps = s.sat[v]
            pd = s.deg[v]
    if ps >= s.k:
        return False
    limit = top + 2
    if limit > s.k:
        limit = s.k
    for c in range(limit):
        if s.cnt[pick * s.k + c]:
            continue
        _assign(s, pick, c)
        nt = top if top > c else c
        if _search(s, remaining - 1, nt):
            return True
        _unassign(s, pick, c)
    return False


def k_colour(adj, int n, int k, precolour):
    if n > WORD:
        return _kernels_py.k_colour(adj, n, k, precolour)
    cdef ColState s
    cdef u64 a[64]
    cdef int colour[64]
    cdef int sat[64]
    cdef int deg[64]
    cdef int i, v, c, top, remaining
    cdef bint ok
    for i in range(n):
        a[i] = <u64>adj[i]
        colour[i] = -1
        sat[i] = 0
        deg[i] = popc(a[i])
    s.n = n
    s.k = k
    s.adj = a
    s.colour = colour
    s.sat = sat
    s.deg = deg
    s.nodes = 0
    s.cnt = <int*>malloc(sizeof(int) * (n * k + 1))
    if s.cnt == NULL:
        raise MemoryError()
    try:
        memset(s.cnt, 0, sizeof(int) * (n * k + 1))
        top = -1
        for v, c in precolour:
            if c >= k or colour[v] != -1 or s.cnt[v * k + c]:
                return None, 0
            _assign(&s, v, c)
            if c > top:
                top = c
        remaining = 0
        for i in range(n):
            if colour[i] == -1:
                remaining += 1
        with nogil:
            ok = _search(&s, remaining, top)
        if ok:
            return [colour[i] for i in range(n)], s.nodes
        return None, s.nodes
    finally:
        free(s.cnt)


def greedy_dsatur(adj, int n):
    # linear-time pass; not hot
    return _kernels_py.greedy_dsatur(adj, n)


# ---------------------------------------------------------------- valuations

cdef struct ValState:
    int n
    int m
    u64* adj
    u64* cliques
    u64* member


cdef void _vsearch(ValState* s, u64 chosen, u64 avail, u64 unsat, list out, long long cap):
    cdef u64 um, cand
    cdef int j, best, bcount, c, v
    if len(out) > cap:
        return
    if unsat == 0:
        out.append(chosen)
        return
    best = -1
    bcount = s.n + 1
    um = unsat
    while um:
        j = lowbit(um)
        um &= um - 1
        c = popc(s.cliques[j] & avail)
        if c < bcount:
            best = j
            bcount = c
            if c == 0:
                return
    cand = s.cliques[best] & avail
    while cand:
        v = lowbit(cand)
        cand &= cand - 1
        _vsearch(s, chosen | bit(v), avail & ~s.adj[v] & ~bit(v), unsat & ~s.member[v], out, cap)
        if len(out) > cap:
            return


def valuations(adj, int n, cliques, cap):
    cdef int m = len(cliques)
    if n == 0 or n > WORD or m > WORD:
        return _kernels_py.valuations(adj, n, cliques, cap)
    cdef ValState s
    cdef u64 a[64]
    cdef u64 cl[64]
    cdef u64 mem[64]
    cdef int i, j
    cdef u64 cm
    for i in range(n):
        a[i] = <u64>adj[i]
        mem[i] = 0
    for j in range(m):
        cl[j] = <u64>cliques[j]
        cm = cl[j]
        while cm:
            i = lowbit(cm)
            cm &= cm - 1
            mem[i] |= bit(j)
    s.n = n
    s.m = m
    s.adj = a
    s.cliques = cl
    s.member = mem
    out = []
    if m:
        _vsearch(&s, 0, _full(n),
                 _full(m), out, cap)
    else:
        out.append(0)
    res = [int(x) for x in out]
    if len(res) > cap:
        return res[:cap], True
    return res, False
