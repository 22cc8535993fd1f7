import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import digraph
from digraph_consensus.graph import (
    GraphFormatError,
    WeightedDigraph,
    averaging_matrix,
    build_laplacian,
    centering_matrix,
    check_standardized,
    complement,
    digraph_from_laplacian,
    max_step_size,
    perron_from_laplacian,
    perron_from_standardized,
    random_digraph,
    standardize,
)


@st.composite
def weight_matrices(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    w = draw(arrays(float, (n, n), elements=st.floats(0, 1)))
    mask = draw(arrays(bool, (n, n)))
    w = np.where(mask, w, 0.0)
    np.fill_diagonal(w, 0.0)
    return w


def test_laplacian_examples():
    assert build_laplacian(WeightedDigraph.empty(1)).tolist() == [[0.0]]
    assert build_laplacian(digraph(2, [(1, 2)])).tolist() == [[0, 0], [-1, 1]]
    assert build_laplacian(digraph(2, [(1, 2), (2, 1)])).tolist() == [[1, -1], [-1, 1]]


@given(weight_matrices())
def test_laplacian_invariants(w):
    L = build_laplacian(WeightedDigraph(w))
    assert np.abs(L.sum(axis=1)).max() < 1e-12
    off = L[~np.eye(len(L), dtype=bool)]
    assert np.all(off <= 0) and np.all(np.diag(L) >= 0)


def test_arc_view_matches_weights():
    g = digraph(3, [(1, 2, 0.5), (3, 1, 2.0)])
    assert g.weights[1, 0] == 0.5 and g.weights[0, 2] == 2.0
    assert g.arcs() == [(0, 1, 0.5), (2, 0, 2.0)]
    assert g.adjacency[0, 1] and g.adjacency[2, 0] and g.adjacency.sum() == 2


@pytest.mark.parametrize(
    "w",
    [
        [[0, -1], [0, 0]],
        [[1, 0], [0, 0]],
        [[0, np.nan], [0, 0]],
        [[0, np.inf], [0, 0]],
        [[0, 1, 0]],
    ],
)
def test_invalid_weights_rejected(w):
    with pytest.raises(GraphFormatError):
        WeightedDigraph(np.array(w, dtype=float))


def test_standardize_examples():
    K = standardize(WeightedDigraph.complete(3, 2.0), 2.0)
    np.testing.assert_allclose(K, centering_matrix(3), atol=1e-15)
    assert K[0].tolist() == pytest.approx([2 / 3, -1 / 3, -1 / 3])
    lt = standardize(digraph(2, [(1, 2)]), 1.0)
    assert lt.tolist() == [[0, 0], [-0.5, 0.5]]
    with pytest.raises(ValueError, match="exceeds"):
        standardize(digraph(2, [(1, 2, 3.0)]), 2.0)


def test_complement_examples(rng):
    for n in (1, 3, 6):
        K = centering_matrix(n)
        np.testing.assert_allclose(complement(K), np.zeros((n, n)), atol=1e-15)
        np.testing.assert_allclose(complement(np.zeros((n, n))), K, atol=1e-15)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        lt = standardize(random_digraph(n, rng), 1.0)
        np.testing.assert_allclose(complement(complement(lt)), lt, atol=1e-12)


def test_complement_weights_are_b_minus_w():
    b = 2.0
    g = digraph(3, [(1, 2, 0.5), (2, 3, 2.0)])
    gc = digraph_from_laplacian(complement(standardize(g, b)) * 3 * b)
    expected = b * (np.ones((3, 3)) - np.eye(3)) - g.weights
    np.testing.assert_allclose(gc.weights, expected, atol=1e-12)
    assert gc.weights[2, 1] == 0  # arc 2 -> 3 had weight b


def test_perron_from_laplacian_examples():
    L = np.array([[1.0, -1], [-1, 1]])
    P = perron_from_laplacian(L, 1.0)
    assert P.matrix.tolist() == [[0, 1], [1, 0]] and P.at_endpoint
    P = perron_from_laplacian(L, 0.5)
    assert P.matrix.tolist() == [[0.5, 0.5], [0.5, 0.5]] and not P.at_endpoint
    with pytest.raises(ValueError, match="bound 1"):
        perron_from_laplacian(L, 2.0)
    with pytest.raises(ValueError):
        perron_from_laplacian(L, 0.0)


def test_perron_interior_is_positive_diagonal(rng):
    for _ in range(50):
        g = random_digraph(int(rng.integers(2, 8)), rng)
        L = build_laplacian(g)
        bound = max_step_size(L)
        if not math.isfinite(bound):
            continue
        P = perron_from_laplacian(L, 0.7 * bound).matrix
        assert P.min() >= 0 and np.all(np.diag(P) > 0)
        np.testing.assert_allclose(P.sum(axis=1), 1, atol=1e-12)


def test_perron_from_standardized(rng):
    n = 4
    assert np.allclose(perron_from_standardized(centering_matrix(n)).matrix, np.eye(n), atol=1e-15)
    assert np.allclose(perron_from_standardized(np.zeros((n, n))).matrix, averaging_matrix(n))
    for _ in range(50):
        n = int(rng.integers(2, 9))
        lt = standardize(random_digraph(n, rng), 1.0)
        P = perron_from_standardized(lt).matrix
        np.testing.assert_allclose(P, np.eye(n) - complement(lt), atol=1e-12)
        np.testing.assert_allclose(P.sum(axis=1), 1, atol=1e-12)
        assert P.min() >= -1e-12


def test_max_step_size_examples():
    assert max_step_size(np.array([[1.0, -1], [-1, 1]])) == 1
    assert max_step_size(np.zeros((3, 3))) == math.inf
    assert max_step_size(np.array([[0.0, 0], [-2, 2]])) == 0.5


def test_check_standardized_rejects():
    with pytest.raises(ValueError):
        check_standardized(np.array([[1.0, 0], [0, 0]]))
    with pytest.raises(ValueError):
        check_standardized(np.array([[0.6, -0.6], [0, 0]]))  # off-diagonal below -1/2


def test_json_roundtrip(rng):
    for _ in range(20):
        g = random_digraph(int(rng.integers(1, 7)), rng)
        for form in ("edges", "weights"):
            g2 = WeightedDigraph.from_json(g.to_json(form))
            assert np.array_equal(g.weights, g2.weights)


def test_json_edges_are_one_based():
    g = WeightedDigraph.from_json('{"n": 3, "edges": [[1, 3, 0.5]]}')
    assert g.weights[2, 0] == 0.5
    assert json.loads(g.to_json()) == {"n": 3, "edges": [[1, 3, 0.5]]}


@pytest.mark.parametrize(
    "text, msg",
    [
        ('{"n": 2, "edges": [[1, 2, 1]', "line 1"),
        ('{"edges": []}', "'n'"),
        ('{"n": 2, "edges": [[1, 3, 1]]}', r"edges\[0\]"),
        ('{"n": 2, "edges": [[1, 1, 1]]}', "self-loop"),
        ('{"n": 2, "edges": [[1, 2, -1]]}', "nonnegative"),
        ('{"n": 2, "edges": [[1, 2, 1], [1, 2, 1]]}', "duplicate"),
        ('{"n": 2, "weights": [[0, 1]]}', "shape"),
        ('{"n": 2}', "exactly one"),
        ("[1, 2]", "object"),
    ],
)
def test_json_errors(text, msg):
    with pytest.raises(GraphFormatError, match=msg):
        WeightedDigraph.from_json(text)


def test_immutable():
    g = digraph(2, [(1, 2)])
    with pytest.raises(ValueError):
        g.weights[0, 1] = 3.0


def test_relabel_conjugates_laplacian(rng):
    g = random_digraph(5, rng)
    perm = rng.permutation(5)
    Pm = np.eye(5)[:, perm]  # column v has its 1 in row perm[v]
    L2 = build_laplacian(g.relabel(perm))
    np.testing.assert_allclose(L2, Pm @ build_laplacian(g) @ Pm.T)


@settings(max_examples=50)
@given(weight_matrices(max_n=6), st.floats(1.0, 4.0))
def test_standardized_bounds(w, b):
    lt = standardize(WeightedDigraph(w), b)
    n = len(w)
    off = lt[~np.eye(n, dtype=bool)]
    assert np.all(off <= 0) and np.all(off >= -1 / n - 1e-15)
