"""Who can influence whom, and what that does to the rank of L.

Builds a small network of three groups, finds its basis bicomponents
(strong components nobody outside can reach), and checks that the Laplacian
loses exactly one rank per basis bicomponent.
"""

import numpy as np

from digraph_consensus import WeightedDigraph, build_laplacian, decompose, forest_dimension
from digraph_consensus.structure import numerical_rank, unilateral_components

# Arcs are (tail, head, weight) with 0-based ids: agent `head` listens to `tail`.
# Group A = {0, 1} talk to each other, group B = {2} is a lone leader,
# and {3, 4} follow both.
edges = [
    (0, 1, 1.0), (1, 0, 0.5),
    (1, 3, 0.7), (2, 3, 0.4),
    (3, 4, 1.0), (4, 3, 0.2),
    (2, 4, 0.9),
]
g = WeightedDigraph.from_edges(5, edges)

dec = decompose(g)
print("strong components   :", dec.to_dict()["strong_components"])
print("basis bicomponents  :", dec.to_dict()["basis_bicomponents"])
print("reachable only from :", dec.to_dict()["k_plus"])
print("undominated vertices:", [v + 1 for v in dec.undominated_vertices])
print("unilateral comps    :", [sorted(v + 1 for v in s) for s in unilateral_components(g)])

fd = forest_dimension(g, cross_check=True)
L = build_laplacian(g)
print(f"\nd = {fd.d}: a maximum out-forest has {fd.max_forest_arc_count} arcs")
print(f"rank L from structure = {g.n - fd.d}, from SVD = {numerical_rank(L)}")

# Cutting the lone leader's influence on vertex 4 does not change d;
# giving the leader an in-arc from group A merges everything under one root.
w = g.weights.copy()
w[2, 0] = 0.3
g2 = WeightedDigraph(w)
print(f"\nafter adding arc 1 -> 3: d = {forest_dimension(g2).d}, rank = {numerical_rank(build_laplacian(g2))}")

# the same check over a batch of random digraphs
rng = np.random.default_rng(7)
agree = 0
for _ in range(300):
    from digraph_consensus.graph import random_digraph

    h = random_digraph(int(rng.integers(2, 9)), rng, density=rng.uniform(0.05, 0.6))
    agree += h.n - forest_dimension(h).d == numerical_rank(build_laplacian(h))
print(f"random digraphs where structural and numerical rank agree: {agree}/300")
