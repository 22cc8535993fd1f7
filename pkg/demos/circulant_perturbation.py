"""Exploratory: how a circulant extremal matrix reacts to extra arcs.

Adds a symmetric perturbation S on a pair of opposite arcs to the circulant
L_k(n) and watches the polygon vertex eigenvalue.  The claim that the
spectrum only depends on the total weight of opposite arc pairs is probed
numerically here; it is not asserted anywhere in the test suite.
"""

import numpy as np

from digraph_consensus.graph import check_standardized
from digraph_consensus.spectral import circulant_laplacian, eigenvalues, polygon_vertex

n, k = 6, 2
base = circulant_laplacian(n, k).matrix
target = polygon_vertex(n, k)
print(f"L_{k}({n}) has the vertex {target:.5f}")


def perturb(M, u, v, a, b):
    """Add weight a to arc v->u and b to arc u->v (in standardized units)."""
    M = M.copy()
    M[u, v] -= a
    M[u, u] += a
    M[v, u] -= b
    M[v, v] += b
    return M


for a, b in [(0.02, 0.02), (0.04, 0.0), (0.0, 0.04), (0.03, 0.01)]:
    M = perturb(base, 0, 3, a, b)
    try:
        check_standardized(M)
    except ValueError as exc:
        print(f"a={a}, b={b}: not standardized ({exc})")
        continue
    vals = eigenvalues(M).values
    top = vals[np.argmax(vals.imag)]
    print(f"a={a:.2f}, b={b:.2f}  total {a + b:.2f}: top eigenvalue {top:.6f}")
