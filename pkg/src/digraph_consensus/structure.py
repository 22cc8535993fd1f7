"""Connectivity structure of communication digraphs.

Strong components come from ``scipy.sparse.csgraph``; basis bicomponents are
the strong components with no arc entering from outside, i.e. the sources of
the condensation.  Their number is the out-forest dimension ``d`` and the
Laplacian has rank ``n - d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Any

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .graph import WeightedDigraph

__all__ = [
    "SizeLimitError",
    "ComponentDecomposition",
    "ForestDimension",
    "reachability",
    "decompose",
    "forest_dimension",
    "laplacian_rank",
    "numerical_rank",
    "has_spanning_diverging_tree",
    "unilateral_components",
]

UNILATERAL_MAX_N = 12


class SizeLimitError(ValueError):
    """Raised when an exhaustive routine is called on too large a digraph."""


def reachability(adj: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure: ``R[u, v]`` true iff a path ``u -> ... -> v`` exists."""
    n = adj.shape[0]
    R = np.asarray(adj, dtype=bool) | np.eye(n, dtype=bool)
    while True:
        R2 = (R.astype(np.int64) @ R.astype(np.int64)) > 0
        if np.array_equal(R2, R):
            return R
        R = R2


def _labels_to_sets(labels: np.ndarray) -> list[frozenset[int]]:
    groups: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(v)
    return sorted((frozenset(vs) for vs in groups.values()), key=min)


@dataclass(frozen=True)
class ComponentDecomposition:
    """Strong, weak and basis components of a digraph (0-based vertex sets)."""

    n: int
    strong_components: list[frozenset[int]]
    weak_components: list[frozenset[int]]
    basis_bicomponents: list[frozenset[int]]
    k_plus: list[frozenset[int]]
    reach: np.ndarray

    @property
    def k_tilde(self) -> frozenset[int]:
        return frozenset().union(*self.basis_bicomponents)

    @property
    def undominated_vertices(self) -> list[int]:
        return sorted(min(K) for K in self.basis_bicomponents if len(K) == 1)

    def basis_of(self, v: int) -> int | None:
        """Index of the basis bicomponent containing ``v``, or None."""
        for idx, K in enumerate(self.basis_bicomponents):
            if v in K:
                return idx
        return None

    def to_dict(self) -> dict[str, Any]:
        def ids(s: frozenset[int]) -> list[int]:
            return sorted(v + 1 for v in s)

        return {
            "strong_components": [ids(s) for s in self.strong_components],
            "weak_components": [ids(s) for s in self.weak_components],
            "basis_bicomponents": [ids(s) for s in self.basis_bicomponents],
            "k_plus": [ids(s) for s in self.k_plus],
            "k_tilde": ids(self.k_tilde),
            "undominated_vertices": [v + 1 for v in self.undominated_vertices],
        }


def decompose(g: WeightedDigraph) -> ComponentDecomposition:
    adj = g.adjacency
    graph = csr_matrix(adj.astype(np.int8))
    _, strong_labels = connected_components(graph, directed=True, connection="strong")
    _, weak_labels = connected_components(graph, directed=True, connection="weak")
    strong = _labels_to_sets(strong_labels)
    weak = _labels_to_sets(weak_labels)

    basis = []
    for comp in strong:
        inside = np.zeros(g.n, dtype=bool)
        inside[list(comp)] = True
        # arcs j -> i with i in comp and j outside
        if not adj[np.ix_(~inside, inside)].any():
            basis.append(comp)

    R = reachability(adj)
    k_plus = []
    for K in basis:
        from_K = R[sorted(K)].any(axis=0)
        others = [v for K2 in basis if K2 is not K for v in K2]
        from_others = R[others].any(axis=0) if others else np.zeros(g.n, dtype=bool)
        k_plus.append(frozenset(int(v) for v in np.flatnonzero(from_K & ~from_others)))
    R.setflags(write=False)
    return ComponentDecomposition(g.n, strong, weak, basis, k_plus, R)


@dataclass(frozen=True)
class ForestDimension:
    d: int
    max_forest_arc_count: int


def forest_dimension(g: WeightedDigraph, cross_check: bool = False) -> ForestDimension:
    """Out-forest dimension, counted as the number of basis bicomponents.

    With ``cross_check`` the count is compared against an exhaustive search
    for the smallest root set spanning the digraph (``n <= 10``).
    """
    d = len(decompose(g).basis_bicomponents)
    if cross_check:
        from .forests import brute_force_forest_dimension

        d_bf = brute_force_forest_dimension(g)
        if d_bf != d:
            raise AssertionError(f"basis bicomponent count {d} != brute-force forest dimension {d_bf}")
    return ForestDimension(d, g.n - d)


def laplacian_rank(g: WeightedDigraph) -> int:
    return g.n - forest_dimension(g).d


def numerical_rank(M: np.ndarray, rtol: float = 1e-8) -> int:
    """Number of singular values above ``rtol * ||M||_2``."""
    M = np.asarray(M)
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def has_spanning_diverging_tree(g: WeightedDigraph) -> bool:
    return forest_dimension(g).d == 1


def _is_unilateral(R: np.ndarray) -> bool:
    return bool(np.all(R | R.T))


def unilateral_components(g: WeightedDigraph) -> list[frozenset[int]]:
    """Maximal vertex sets whose induced subgraph is unilaterally connected.

    These may overlap.  Exhaustive over subsets, so limited to ``n <= 12``.
    """
    n = g.n
    if n > UNILATERAL_MAX_N:
        raise SizeLimitError(f"unilateral components need n <= {UNILATERAL_MAX_N}, got n={n}")
    adj = g.adjacency
    found: list[frozenset[int]] = []
    for size in range(n, 0, -1):
        for subset in combinations(range(n), size):
            s = frozenset(subset)
            if any(s <= f for f in found):
                continue
            idx = list(subset)
            if _is_unilateral(reachability(adj[np.ix_(idx, idx)])):
                found.append(s)
    return sorted(found, key=lambda s: sorted(s))
