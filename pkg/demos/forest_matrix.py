"""The limit of consensus as a ratio of forest weights.

For the two-leader network below, the long-run state of every agent is a
weighted average of the leaders' initial opinions.  The weights are read off
the maximum out-forests, and match what the Perron chain averages to and
what the continuous flow settles at.
"""

import numpy as np
import scipy.linalg

from digraph_consensus import WeightedDigraph, build_laplacian, enumerate_max_out_forests
from digraph_consensus.forests import cesaro_limit, normalized_forest_matrix, forest_matrix_audit
from digraph_consensus.graph import max_step_size, perron_from_laplacian

np.set_printoptions(precision=4, suppress=True)

g = WeightedDigraph.from_edges(
    4,
    [(0, 2, 1.0), (1, 2, 3.0), (2, 3, 1.0), (1, 3, 1.0)],
)

fam = enumerate_max_out_forests(g)
print(f"{len(fam.forests)} maximum out-forests, total weight sigma = {fam.sigma}")
for f in fam.forests:
    arcs = ", ".join(f"{j + 1}->{i + 1}" for j, i in sorted(f.arcs))
    print(f"  roots {sorted(r + 1 for r in f.roots)}  arcs {arcs:<20} weight {f.weight}")

J = normalized_forest_matrix(g)
print("\nforest matrix J:\n", J)

L = build_laplacian(g)
P = perron_from_laplacian(L, 0.9 * max_step_size(L)).matrix
print("Cesaro limit of P agrees:", np.allclose(cesaro_limit(P), J, atol=1e-9))
print("exp(-50 L) agrees      :", np.allclose(scipy.linalg.expm(-50 * L), J, atol=1e-9))

x0 = np.array([0.0, 1.0, 5.0, -2.0])
print("\nstarting from", x0, "the agents settle at", J @ x0)

rep = forest_matrix_audit(g)
print()
print(rep)
