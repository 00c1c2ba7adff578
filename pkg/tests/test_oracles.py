"""Every frozen oracle value recomputed by the package, in one place."""
from fractions import Fraction

import pytest

from kscontext.algebra_core import build_context_category, exclusivity_graph
from kscontext.catalog import (
    two_solution_gadget, chsh_event_functional, chsh_scenario, forced_zero_gadget,
    n_cycle, pr_box, yu_oh, yu_oh_completion,
)
from kscontext.correlations import classical_maximum, functional_value
from kscontext.diophantine import all_dimension_functions
from kscontext.ortho_graph import chromatic_number, cycle_graph, enumerate_valuations, maximal_cliques
from kscontext.realization import Subspace, graph_from_vectors


def _valuation_count(g):
    return len(enumerate_valuations(g, maximal_cliques(g)))


def _completion():
    return yu_oh_completion(13)[0]


COMPUTE = {
    "two_solution_gadget_dims_d3": lambda: sorted(
        [x.dims["pt1"], x.dims["pt2"]]
        for x in all_dimension_functions(exclusivity_graph(two_solution_gadget()),
                                         [tuple(c) for c in two_solution_gadget().max_contexts], 3)),
    "chsh_atom_count": lambda: len(chsh_scenario().atoms),
    "chsh_classical_max": lambda: classical_maximum(chsh_scenario(), chsh_event_functional()),
    "chsh_poset_size": lambda: len(build_context_category(chsh_scenario())),
    "chsh_pr_value": lambda: str(functional_value(pr_box(), chsh_event_functional())),
    "chsh_valuations": lambda: _valuation_count(exclusivity_graph(chsh_scenario())),
    "cross_product_e1_e2": lambda: list(Subspace.span([(1, 0, 0), (0, 1, 0)], 3).complement().basis[0]),
    "five_cycle_valuations": lambda: _valuation_count(cycle_graph([f"e{i}" for i in range(5)])),
    "forced_zero_solutions_upto_d8": lambda: sum(
        len(all_dimension_functions(*forced_zero_gadget(), d)) for d in range(1, 9)),
    "o53_poset_size": lambda: len(build_context_category(n_cycle(5, 3))),
    "yu_oh13_chromatic": lambda: chromatic_number(graph_from_vectors(yu_oh(13))[0])[0],
    "yu_oh13_completion_chromatic": lambda: chromatic_number(_completion())[0],
    "yu_oh13_completion_max_cliques": lambda: len(maximal_cliques(_completion())),
    "yu_oh13_completion_triangles": lambda: sum(1 for c in maximal_cliques(_completion()) if len(c) == 3),
    "yu_oh13_completion_valuations": lambda: _valuation_count(_completion()),
    "yu_oh13_completion_vertices": lambda: len(_completion()),
    "yu_oh13_edges": lambda: len(graph_from_vectors(yu_oh(13))[0].edges),
    "yu_oh13_max_cliques": lambda: sorted(sorted(c) for c in maximal_cliques(graph_from_vectors(yu_oh(13))[0])),
    "yu_oh15_chromatic": lambda: chromatic_number(graph_from_vectors(yu_oh(15))[0])[0],
    "yu_oh15_edges": lambda: len(graph_from_vectors(yu_oh(15))[0].edges),
    "yu_oh15_max_cliques": lambda: sorted(sorted(c) for c in maximal_cliques(graph_from_vectors(yu_oh(15))[0])),
    "yu_oh_completions_coincide": lambda: (set(yu_oh_completion(13)[1].vertex_map.values())
                                          == set(yu_oh_completion(15)[1].vertex_map.values())),
}


def test_every_oracle_key_is_checked(oracle):
    assert set(COMPUTE) == set(oracle)


@pytest.mark.parametrize("key", sorted(COMPUTE))
def test_package_matches_oracle(key, oracle):
    assert COMPUTE[key]() == oracle[key]


def test_pr_value_is_exact(oracle):
    assert Fraction(oracle["chsh_pr_value"]) == functional_value(pr_box(), chsh_event_functional())
