"""Where the eigenvalues of standardized Laplacians can live.

Plots, for n = 5, the spectra of many random standardized Laplacians together
with the proven localization region, the polygon S(n) and the limiting
cycloid.  The figure is written to ``spectral_localization.png``.
"""

import math

import numpy as np

from digraph_consensus import polygon_vertices, region_contains
from digraph_consensus.fuzz import instance
from digraph_consensus.graph import standardize
from digraph_consensus.spectral import circulant_laplacian, cycloid_samples, eigenvalues, h_exact

n = 5
vals = np.concatenate([eigenvalues(standardize(instance(0, n, i), 1.0)).values for i in range(4000)])
print(f"{vals.size} eigenvalues, all inside the region: {bool(np.all(region_contains(n, vals)))}")
print(f"largest imaginary part {vals.imag.max():.5f}  vs  h({n}) = {h_exact(n).value:.5f}")

# the polygon vertices are attained by circulant matrices
for k in range(1, n):
    sp = eigenvalues(circulant_laplacian(n, k).matrix)
    lam = polygon_vertices(n).vertices[k]
    print(f"  k={k}: vertex {lam:.4f} reached within {sp.distance_to(lam):.1e}")

xs, ys = np.meshgrid(np.linspace(-0.05, 1.05, 500), np.linspace(-0.4, 0.4, 300))
inside = region_contains(n, xs + 1j * ys)

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available; skipping the figure")
else:
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.contourf(xs, ys, inside, levels=[0.5, 1.5], colors=["#dde8f5"])
    V = polygon_vertices(n).vertices
    ax.fill(V.real, V.imag, fc="none", ec="k", lw=1.2, label=f"S({n})")
    ax.scatter(vals.real, vals.imag, s=1, c="tab:red", alpha=0.3, label="random spectra")
    c = cycloid_samples(800)
    ax.plot(c.real, c.imag, ".", ms=0.5, c="tab:green", label="cycloid limit")
    ax.axhline(1 / math.pi, ls=":", c="gray")
    ax.set_aspect("equal")
    ax.legend(loc="lower right", fontsize=8)
    fig.savefig("spectral_localization.png", dpi=150, bbox_inches="tight")
    print("wrote spectral_localization.png")
