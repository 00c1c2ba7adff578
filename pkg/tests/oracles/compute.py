"""Independent oracle computations for values the package derives.

Nothing here imports kscontext. Run as a script to regenerate frozen.json:

    python3 tests/oracles/compute.py > tests/oracles/frozen.json
"""
import itertools
import json
import sys
from fractions import Fraction

import networkx as nx
import sympy

YU_OH_13 = {
    "z1": (1, 0, 0), "z2": (0, 1, 0), "z3": (0, 0, 1),
    "y1+": (0, 1, 1), "y2+": (1, 0, 1), "y3+": (1, 1, 0),
    "y1-": (0, 1, -1), "y2-": (1, 0, -1), "y3-": (1, -1, 0),
    "h0": (1, 1, 1), "h1": (-1, 1, 1), "h2": (1, -1, 1), "h3": (1, 1, -1),
}


def yu_oh(variant):
    v = dict(YU_OH_13)
    if variant == 15:
        del v["h0"]
        v.update({"x01": (-2, 1, 1), "x02": (1, -2, 1), "x03": (1, 1, -2)})
    return v


def ortho_graph(vectors):
    g = nx.Graph()
    g.add_nodes_from(vectors)
    for a, b in itertools.combinations(vectors, 2):
        if sum(x * y for x, y in zip(vectors[a], vectors[b])) == 0:
            g.add_edge(a, b)
    return g


def colourable(g, k):
    order = sorted(g.nodes, key=lambda v: (-g.degree(v), v))
    col = {}

    def rec(i, used):
        if i == len(order):
            return True
        v = order[i]
        for c in range(min(k, used + 1)):
            if all(col.get(u) != c for u in g[v]):
                col[v] = c
                if rec(i + 1, max(used, c + 1)):
                    return True
                del col[v]
        return False

    return rec(0, 0)


def chromatic(g):
    k = 1
    while not colourable(g, k):
        k += 1
    return k


def ray_key(v):
    m = sympy.Matrix(v)
    den = sympy.ilcm(*[sympy.fraction(sympy.nsimplify(x))[1] for x in m])
    ints = [int(x * den) for x in m]
    g = 0
    for x in ints:
        g = sympy.igcd(g, x)
    ints = [x // g for x in ints]
    if next(x for x in ints if x) < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def completion(vectors):
    """Adjoin null-space rays of deficient maximal cliques until closed (rank-one inputs)."""
    vecs = {k: ray_key(v) for k, v in vectors.items()}
    while True:
        g = ortho_graph(vecs)
        seen = set(vecs.values())
        new = {}
        for c in nx.find_cliques(g):
            if len(c) < 3:
                ns = sympy.Matrix([vecs[x] for x in c]).nullspace()
                for n in ns:
                    r = ray_key(list(n))
                    if r not in seen:
                        seen.add(r)
                        new["n" + ",".join(sorted(c))] = r
        if not new:
            return vecs, g
        vecs.update(new)


def brute_valuations(contexts, events=None):
    """0/1 assignments choosing one atom per context, consistent on shared events.

    Backtracks context by context; a choice is rejected as soon as some context
    would hold two chosen atoms.
    """
    atoms = sorted({a for c in contexts for a in c})
    ctx = [set(c) for c in contexts]
    out = set()

    def rec(i, chosen):
        if i == len(ctx):
            if events:
                for reps in events.values():
                    if len({bool(chosen & set(r)) for r in reps}) != 1:
                        return
            out.add(tuple(sorted(chosen)))
            return
        hit = chosen & ctx[i]
        if len(hit) > 1:
            return
        if hit:
            rec(i + 1, chosen)
            return
        for a in sorted(ctx[i]):
            new = chosen | {a}
            if all(len(new & c) <= 1 for c in ctx):
                rec(i + 1, new)

    rec(0, frozenset())
    return sorted(out), atoms


def intersection_closure(contexts):
    elems = {frozenset(c) for c in contexts}
    while True:
        new = {a & b for a in elems for b in elems} | elems
        if new == elems:
            break
        elems = new
    return elems | {frozenset()}


def chsh_contexts():
    sg = ("+", "-")
    contexts, events = [], {}
    for i, j in itertools.product((0, 1), repeat=2):
        contexts.append([f"A{i}B{j}:{a}{b}" for a in sg for b in sg])
    for i in (0, 1):
        for a in sg:
            events[f"A{i}{a}"] = [[f"A{i}B{j}:{a}{b}" for b in sg] for j in (0, 1)]
    for j in (0, 1):
        for b in sg:
            events[f"B{j}{b}"] = [[f"A{i}B{j}:{a}{b}" for a in sg] for i in (0, 1)]
    return contexts, events


def chsh_named_poset():
    """Poset of named-event sets: each context names its atoms and the four marginal events."""
    contexts, events = chsh_contexts()
    named = []
    for c in contexts:
        n = set(c)
        for e, reps in events.items():
            if any(set(r) <= set(c) for r in reps):
                n.add(e)
        named.append(frozenset(n))
    return intersection_closure(named)


def chsh_classical_max_and_pr():
    contexts, events = chsh_contexts()
    vals, _ = brute_valuations(contexts, events)
    win = set()
    for i, j in itertools.product((0, 1), repeat=2):
        for a, b in itertools.product("+-", repeat=2):
            if (a == b) != (i == 1 and j == 1):
                win.add(f"A{i}B{j}:{a}{b}")
    best = max(len(win & set(v)) for v in vals)
    pr = sum(Fraction(1, 2) for _ in win)
    return len(vals), best, pr


def dims_brute(contexts, d, bound):
    atoms = sorted({a for c in contexts for a in c})
    sols = []
    for dims in itertools.product(range(1, bound + 1), repeat=len(atoms)):
        m = dict(zip(atoms, dims))
        if all(sum(m[a] for a in c) == d for c in contexts):
            sols.append(m)
    return sols


def main():
    out = {}
    for variant in (13, 15):
        g = ortho_graph(yu_oh(variant))
        out[f"yu_oh{variant}_chromatic"] = chromatic(g)
        out[f"yu_oh{variant}_edges"] = g.number_of_edges()
        out[f"yu_oh{variant}_max_cliques"] = sorted(sorted(c) for c in nx.find_cliques(g))
    vecs, g = completion(yu_oh(13))
    out["yu_oh13_completion_vertices"] = len(vecs)
    out["yu_oh13_completion_triangles"] = sum(1 for c in nx.find_cliques(g) if len(c) == 3)
    out["yu_oh13_completion_max_cliques"] = sum(1 for _ in nx.find_cliques(g))
    out["yu_oh13_completion_chromatic"] = chromatic(g)
    vecs15, _ = completion(yu_oh(15))
    out["yu_oh_completions_coincide"] = set(vecs15.values()) == set(vecs.values())
    tri = [sorted(c) for c in nx.find_cliques(g) if len(c) == 3]
    vals, _ = brute_valuations(tri)
    out["yu_oh13_completion_valuations"] = len(vals)

    o53 = [[f"s{(i - 1) % 5}", f"s{i}", f"c{i}"] for i in range(5)]
    out["o53_poset_size"] = len(intersection_closure(o53))
    out["chsh_poset_size"] = len(chsh_named_poset())
    out["chsh_atom_count"] = len({a for c in chsh_contexts()[0] for a in c})
    n_vals, cmax, pr = chsh_classical_max_and_pr()
    out["chsh_valuations"] = n_vals
    out["chsh_classical_max"] = cmax
    out["chsh_pr_value"] = str(pr)
    five = [[f"e{i}", f"e{(i + 1) % 5}"] for i in range(5)]
    out["five_cycle_valuations"] = len(brute_valuations(five)[0])
    gadget = [["pt1", "pt2"], ["q1", "q2", "q3"], ["q1", "r1", "r2"]]
    out["two_solution_gadget_dims_d3"] = sorted([m["pt1"], m["pt2"]] for m in dims_brute(gadget, 3, 3))
    out["forced_zero_solutions_upto_d8"] = sum(
        len(dims_brute([["a", "b"], ["a", "b", "c"]], d, d)) for d in range(1, 9))
    out["cross_product_e1_e2"] = list(ray_key(list(sympy.Matrix([1, 0, 0]).cross(sympy.Matrix([0, 1, 0])))))
    json.dump(out, sys.stdout, sort_keys=True, indent=1)
    sys.stdout.write("\n")
    return out


if __name__ == "__main__":
    main()
