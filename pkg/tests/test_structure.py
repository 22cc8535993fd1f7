import json

import numpy as np
import pytest

from conftest import digraph
from digraph_consensus.forests import brute_force_forest_dimension, iter_out_forests
from digraph_consensus.graph import WeightedDigraph, build_laplacian, random_digraph
from digraph_consensus.structure import (
    ForestDimension,
    SizeLimitError,
    decompose,
    forest_dimension,
    has_spanning_diverging_tree,
    laplacian_rank,
    numerical_rank,
    reachability,
    unilateral_components,
)

PATH3 = digraph(3, [(1, 2), (2, 3)])


def sets(*groups):
    return [frozenset(v - 1 for v in g) for g in groups]


def test_decompose_two_cycle(two_cycle):
    dec = decompose(two_cycle)
    assert dec.strong_components == sets({1, 2})
    assert dec.basis_bicomponents == sets({1, 2})
    assert dec.undominated_vertices == []


def test_decompose_two_sources(two_sources):
    dec = decompose(two_sources)
    assert dec.basis_bicomponents == sets({1}, {2})
    assert dec.undominated_vertices == [0, 1]
    assert dec.k_plus == sets({1}, {2})
    assert dec.k_tilde == frozenset({0, 1})
    assert dec.basis_of(2) is None and dec.basis_of(1) == 1


def test_decompose_empty():
    dec = decompose(WeightedDigraph.empty(3))
    assert len(dec.basis_bicomponents) == 3 and len(dec.weak_components) == 3


def test_decomposition_json(two_sources):
    d = json.loads(json.dumps(decompose(two_sources).to_dict()))
    assert d["basis_bicomponents"] == [[1], [2]]
    assert d["k_tilde"] == [1, 2]
    assert d["weak_components"] == [[1, 2, 3]]


def test_k_plus_includes_exclusive_descendants():
    # 1 -> 2 -> 3, and 4 -> 3
    g = digraph(4, [(1, 2), (2, 3), (4, 3)])
    dec = decompose(g)
    assert dec.basis_bicomponents == sets({1}, {4})
    assert dec.k_plus == sets({1, 2}, {4})


def test_forest_dimension_examples(two_sources, rng):
    assert forest_dimension(two_sources).d == 2
    assert forest_dimension(WeightedDigraph.empty(5)) == ForestDimension(5, 0)
    for n in range(2, 8):
        assert forest_dimension(WeightedDigraph.cycle(n)).d == 1
        assert forest_dimension(WeightedDigraph.complete(n)).d == 1


def test_laplacian_rank_examples(two_cycle, two_sources):
    assert laplacian_rank(two_cycle) == 1
    assert laplacian_rank(WeightedDigraph.empty(4)) == 0
    assert laplacian_rank(two_sources) == 1


def test_spanning_tree_examples(two_cycle, two_sources):
    assert has_spanning_diverging_tree(PATH3)
    assert not has_spanning_diverging_tree(two_sources)
    assert has_spanning_diverging_tree(two_cycle)


def test_unilateral_examples(two_sources):
    assert unilateral_components(PATH3) == sets({1, 2, 3})
    assert unilateral_components(two_sources) == sets({1, 3}, {2, 3})
    assert unilateral_components(WeightedDigraph.empty(2)) == sets({1}, {2})
    with pytest.raises(SizeLimitError):
        unilateral_components(WeightedDigraph.empty(13))


def test_reachability_is_reflexive_closure():
    R = reachability(PATH3.adjacency)
    assert R.tolist() == [[True, True, True], [False, True, True], [False, False, True]]


def test_every_vertex_reached_from_a_basis(rng):
    for _ in range(100):
        g = random_digraph(int(rng.integers(1, 11)), rng, density=rng.uniform(0.02, 0.4))
        dec = decompose(g)
        basis = sorted(dec.k_tilde)
        assert dec.reach[basis].any(axis=0).all()
        flat = [v for K in dec.basis_bicomponents for v in K]
        assert len(flat) == len(set(flat))
        assert all(K in dec.strong_components for K in dec.basis_bicomponents)


def test_dimension_matches_brute_force(rng):
    for _ in range(150):
        n = int(rng.integers(1, 11))
        g = random_digraph(n, rng, density=rng.uniform(0.02, 0.5))
        d = forest_dimension(g, cross_check=True).d
        assert d == brute_force_forest_dimension(g)


def test_dimension_matches_largest_forest(rng):
    # independent route: largest arc count over every out-forest
    for _ in range(40):
        n = int(rng.integers(1, 6))
        g = random_digraph(n, rng, density=rng.uniform(0.05, 0.6))
        most = max(len(f.arcs) for f in iter_out_forests(g))
        assert forest_dimension(g).max_forest_arc_count == most


def test_rank_matches_numerical_rank(rng):
    for _ in range(200):
        n = int(rng.integers(2, 9))
        g = random_digraph(n, rng, density=rng.uniform(0.05, 0.9))
        assert laplacian_rank(g) == numerical_rank(build_laplacian(g))


def test_numerical_rank_zero():
    assert numerical_rank(np.zeros((3, 3))) == 0


def test_sandwich(rng):
    for _ in range(60):
        n = int(rng.integers(1, 11))
        g = random_digraph(n, rng, density=rng.uniform(0.02, 0.4))
        dec = decompose(g)
        d = len(dec.basis_bicomponents)
        assert len(dec.weak_components) <= d
        assert d <= min(len(dec.strong_components), len(unilateral_components(g)))


def test_spanning_tree_both_directions(rng):
    for _ in range(50):
        n = int(rng.integers(2, 9))
        # a random rooted tree plus extra arcs away from the root keeps one basis bicomponent
        parent = [int(rng.integers(0, v)) for v in range(1, n)]
        edges = [(p, v + 1, 1.0) for v, p in enumerate(parent)]
        extra = [(j, i, 0.5) for j in range(1, n) for i in range(1, n) if i != j and rng.random() < 0.3]
        g = WeightedDigraph.from_edges(n, edges + extra)
        assert has_spanning_diverging_tree(g)
        w = g.weights.copy()
        w[0, :] = 0.0
        w[1, :] = 0.0  # vertices 0 and 1 now ignore everyone
        assert not has_spanning_diverging_tree(WeightedDigraph(w))
