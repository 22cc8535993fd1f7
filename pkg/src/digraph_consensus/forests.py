"""Maximum out-forests and the normalized forest matrix.

An out-forest (spanning diverging forest) is encoded by a parent tuple:
``parent[v]`` is the tail of the unique arc entering ``v``, or ``-1`` when
``v`` is a root.  Its weight is the product of its arc weights (``1`` for the
arcless forest).

The normalized matrix of maximum out-forests has ``(i, j)`` entry equal to the
share of the total maximum-forest weight carried by forests in which ``i``
lies in the tree rooted at ``j``.  It is the eigenprojection of the Laplacian
at 0 and equals the Cesaro limit of any Perron matrix ``I - eps L``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Any, Iterator, Sequence

import numpy as np

from .graph import WeightedDigraph, digraph_from_laplacian
from .report import Report
from .structure import SizeLimitError, decompose, numerical_rank

__all__ = [
    "ENUMERATION_MAX_N",
    "CesaroConvergenceError",
    "OutForest",
    "ForestFamily",
    "iter_out_forests",
    "brute_force_forest_dimension",
    "enumerate_max_out_forests",
    "normalized_forest_matrix",
    "cesaro_limit",
    "eigenprojection_audit",
    "asymptotic_state",
    "forest_matrix_audit",
]

ENUMERATION_MAX_N = 10


class CesaroConvergenceError(RuntimeError):
    def __init__(self, residual: float, m: int):
        super().__init__(f"Cesaro means did not settle: residual {residual:.3e} after m={m}")
        self.residual = residual
        self.m = m


@dataclass(frozen=True)
class OutForest:
    parent: tuple[int, ...]
    weight: float

    @property
    def arcs(self) -> frozenset[tuple[int, int]]:
        """Arcs as ``(tail, head)`` pairs."""
        return frozenset((p, v) for v, p in enumerate(self.parent) if p >= 0)

    @property
    def roots(self) -> frozenset[int]:
        return frozenset(v for v, p in enumerate(self.parent) if p < 0)

    def root_of(self, v: int) -> int:
        while self.parent[v] >= 0:
            v = self.parent[v]
        return v

    def to_dict(self) -> dict[str, Any]:
        return {
            "arcs": [[j + 1, i + 1] for j, i in sorted(self.arcs)],
            "roots": sorted(r + 1 for r in self.roots),
            "weight": self.weight,
        }


@dataclass(frozen=True)
class ForestFamily:
    """All maximum out-forests of a digraph and their total weight ``sigma``."""

    n: int
    d: int
    forests: tuple[OutForest, ...]
    sigma: float

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "d": self.d, "sigma": self.sigma, "forests": [f.to_dict() for f in self.forests]}


def _check_size(n: int) -> None:
    if n > ENUMERATION_MAX_N:
        raise SizeLimitError(f"forest enumeration needs n <= {ENUMERATION_MAX_N}, got n={n}")


def _forests_with_roots(W: np.ndarray, roots: Sequence[int]) -> Iterator[tuple[tuple[int, ...], float]]:
    """Out-forests whose root set is exactly ``roots``: every other vertex gets one in-arc."""
    n = W.shape[0]
    parent = [-2] * n
    for r in roots:
        parent[r] = -1
    todo = [v for v in range(n) if parent[v] == -2]
    choices = [[int(j) for j in np.flatnonzero(W[v])] for v in todo]

    def creates_cycle(v: int, p: int) -> bool:
        while p >= 0:
            if p == v:
                return True
            p = parent[p]
        return False

    def rec(k: int, w: float) -> Iterator[tuple[tuple[int, ...], float]]:
        if k == len(todo):
            yield tuple(parent), w
            return
        v = todo[k]
        for p in choices[k]:
            if creates_cycle(v, p):
                continue
            parent[v] = p
            yield from rec(k + 1, w * W[v, p])
            parent[v] = -2

    yield from rec(0, 1.0)


def iter_out_forests(g: WeightedDigraph) -> Iterator[OutForest]:
    """Every spanning out-forest of ``g``, of every size (exhaustive)."""
    for r in range(1, g.n + 1):
        for roots in combinations(range(g.n), r):
            for parent, w in _forests_with_roots(g.weights, roots):
                yield OutForest(parent, w)


def brute_force_forest_dimension(g: WeightedDigraph) -> int:
    """Smallest number of trees in a spanning out-forest, by search over root sets.

    A spanning out-forest with root set ``R`` exists iff every vertex can be
    reached from ``R`` (grow a search tree from the roots), so this is the
    smallest size of such a root set.  Independent of any component analysis.
    """
    _check_size(g.n)
    succ = [[i for i in range(g.n) if g.weights[i, j] > 0] for j in range(g.n)]
    for r in range(1, g.n + 1):
        for roots in combinations(range(g.n), r):
            seen = set(roots)
            stack = list(roots)
            while stack:
                for i in succ[stack.pop()]:
                    if i not in seen:
                        seen.add(i)
                        stack.append(i)
            if len(seen) == g.n:
                return r
    return g.n


def _iter_max_forests(g: WeightedDigraph) -> Iterator[tuple[tuple[int, ...], float]]:
    # A maximum out-forest has exactly one root in each basis bicomponent and
    # no other roots, so only those root sets are visited.
    basis = decompose(g).basis_bicomponents
    for roots in product(*(sorted(K) for K in basis)):
        yield from _forests_with_roots(g.weights, roots)


def enumerate_max_out_forests(g: WeightedDigraph) -> ForestFamily:
    _check_size(g.n)
    forests = tuple(OutForest(p, w) for p, w in _iter_max_forests(g))
    d = len(forests[0].roots)
    return ForestFamily(g.n, d, forests, math.fsum(f.weight for f in forests))


def _root_table(parent: tuple[int, ...]) -> list[int]:
    n = len(parent)
    root = [-1] * n
    for v in range(n):
        path = []
        u = v
        while root[u] < 0 and parent[u] >= 0:
            path.append(u)
            u = parent[u]
        r = root[u] if root[u] >= 0 else u
        root[u] = r
        for x in path:
            root[x] = r
    return root


def normalized_forest_matrix(g: WeightedDigraph) -> np.ndarray:
    """The normalized matrix of maximum out-forests, by exhaustive enumeration."""
    _check_size(g.n)
    n = g.n
    acc = np.zeros((n, n))
    sigma = 0.0
    rows = np.arange(n)
    for parent, w in _iter_max_forests(g):
        acc[rows, _root_table(parent)] += w
        sigma += w
    return acc / sigma


def cesaro_limit(P: np.ndarray, tol: float = 1e-10, max_iters: int = 64) -> np.ndarray:
    """Cesaro limit ``lim (1/m) sum_{i=1..m} P^i`` of a row-stochastic matrix.

    The window ``m`` doubles each iteration (``m = 1, 2, 4, ...``) and the
    mean ``A_m`` is accepted once ``||A_m - A_{m/2}||_inf < tol``.  Works for
    periodic chains, where ``P^m`` itself oscillates.  ``max_iters`` bounds the
    number of doublings.
    """
    P = np.asarray(getattr(P, "matrix", P), dtype=float)
    if P.min() < -1e-12 or np.abs(P.sum(axis=1) - 1).max() > 1e-12:
        raise ValueError("P must be row stochastic")
    Pm = P.copy()
    S = P.copy()
    m = 1
    resid = math.inf
    for _ in range(max_iters):
        S_next = S + Pm @ S
        Pm = Pm @ Pm
        # squaring compounds row-sum rounding as (1 + delta)^m
        Pm /= Pm.sum(axis=1, keepdims=True)
        A_prev = S / m
        m *= 2
        A = S_next / m
        S = S_next
        resid = float(np.abs(A - A_prev).sum(axis=1).max())
        if resid < tol:
            return A
    raise CesaroConvergenceError(resid, m)


def eigenprojection_audit(
    L: np.ndarray, J: np.ndarray, d: int | None = None, tol: float = 1e-10
) -> Report:
    """Check that ``J`` is the eigenprojection of ``L`` at zero.

    Residuals of ``J^2 - J``, ``L J`` and ``J L``, the rank of ``J`` against
    ``d`` (computed from the digraph of ``L`` when not given) and the index
    condition ``rank L^2 == rank L``.
    """
    L = np.asarray(L, dtype=float)
    J = np.asarray(J, dtype=float)
    if d is None:
        d = len(decompose(digraph_from_laplacian(L)).basis_bicomponents)
    scale = max(1.0, float(np.abs(L).max(initial=0.0)))
    rep = Report("eigenprojection")
    r_idem = float(np.abs(J @ J - J).max())
    r_lj = float(np.abs(L @ J).max()) / scale
    r_jl = float(np.abs(J @ L).max()) / scale
    rank_j = numerical_rank(J)
    rank_l, rank_l2 = numerical_rank(L), numerical_rank(L @ L)
    rep.add("idempotent", r_idem < tol, r_idem)
    rep.add("LJ=0", r_lj < tol, r_lj)
    rep.add("JL=0", r_jl < tol, r_jl)
    rep.add("rank J = d", rank_j == d, abs(rank_j - d), f"rank={rank_j}, d={d}")
    rep.add("index L = 1", rank_l2 == rank_l, abs(rank_l2 - rank_l), f"rank L={rank_l}, rank L^2={rank_l2}")
    return rep


def asymptotic_state(g: WeightedDigraph, x0: Sequence[float]) -> np.ndarray:
    """Limit of the continuous protocol (and Cesaro mean of the discrete one) from ``x0``."""
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (g.n,):
        raise ValueError(f"x0 must have length {g.n}")
    return normalized_forest_matrix(g) @ x0


def _tree_weights(W: np.ndarray) -> np.ndarray:
    """Weight of spanning diverging trees rooted at each vertex of the digraph ``W``."""
    n = W.shape[0]
    return np.array([math.fsum(w for _, w in _forests_with_roots(W, (j,))) for j in range(n)])


def forest_matrix_audit(g: WeightedDigraph, tol: float = 1e-10) -> Report:
    """Entrywise audit of the normalized forest matrix against the digraph structure.

    Checks, in order: row stochasticity; the support pattern (nonzero iff the
    column is a basis vertex reaching the row); the product formula through
    tree weights of each basis bicomponent and forests of the digraph with
    that bicomponent's arcs removed; unit diagonal mass per basis
    bicomponent; column proportionality inside a bicomponent; the four entry
    comparisons ``J_ii >= J_ji`` and its refinements; agreement with the
    matrix of each bicomponent taken alone; invariance under re-weighting
    arcs inside ``K+ \\ K``.
    """
    _check_size(g.n)
    n = g.n
    W = g.weights
    dec = decompose(g)
    R = dec.reach
    fam = enumerate_max_out_forests(g)
    J = normalized_forest_matrix(g)
    sigma = fam.sigma
    k_tilde = dec.k_tilde
    rep = Report("forest matrix entry audit")
    rep.data["J"] = J.tolist()

    # rows are probability vectors
    r1 = max(float(np.abs(J.sum(axis=1) - 1).max()), float(max(0.0, -J.min())))
    rep.add("row stochastic", r1 < tol, r1)

    # support pattern (enumeration gives structural zeros exactly)
    expected = np.zeros((n, n), dtype=bool)
    for j in k_tilde:
        expected[:, j] = R[j]
    bad = int(np.sum((J > 0) != expected))
    rep.add("support on reachable basis columns", bad == 0, bad)

    r3 = r3b = r4 = r5 = 0.0
    und_ok = True
    for K, Kp in zip(dec.basis_bicomponents, dec.k_plus):
        Ks = sorted(K)
        tT = _tree_weights(W[np.ix_(Ks, Ks)])
        tree_w = dict(zip(Ks, tT))
        tT_total = math.fsum(tT)
        W_minus = W.copy()
        W_minus[np.ix_(Ks, Ks)] = 0.0
        g_minus = WeightedDigraph(W_minus)
        p_to = np.zeros(n)
        for parent, w in _iter_max_forests(g_minus):
            roots = _root_table(parent)
            for i in range(n):
                if roots[i] in K:
                    p_to[i] += w
        for j in Ks:
            r3 = max(r3, float(np.abs(J[:, j] - tree_w[j] * p_to / sigma).max()))
            for i in Kp:
                r3b = max(r3b, abs(J[i, j] - J[j, j]), abs(J[j, j] - tree_w[j] / tT_total))
        r4 = max(r4, abs(sum(J[j, j] for j in Ks) - 1.0))
        if len(Ks) == 1:
            und_ok &= abs(J[Ks[0], Ks[0]] - 1.0) <= tol
        for j1 in Ks:
            for j2 in Ks:
                r5 = max(r5, float(np.abs(J[:, j2] - tree_w[j2] / tree_w[j1] * J[:, j1]).max()))
    rep.add("tree-times-path product formula", r3 < tol and r3b < tol, max(r3, r3b))
    rep.add("unit diagonal mass per bicomponent", r4 < tol and und_ok, r4)
    rep.add("column proportionality", r5 < tol, r5)

    # entry comparisons between rows and columns
    basis_of = [dec.basis_of(v) for v in range(n)]
    v1 = v2 = v3 = 0
    r_t4 = 0.0
    for i in range(n):
        for j in range(n):
            if J[j, i] > J[i, i] + tol:
                v1 += 1
            if J[i, i] > J[j, i] + tol:
                kp = dec.k_plus[basis_of[i]] if basis_of[i] is not None else frozenset()
                if i not in k_tilde or j in kp or R[j, i]:
                    v2 += 1
                if J[j, i] > tol and j in k_tilde:
                    v3 += 1
            if J[i, j] > tol:
                r_t4 = max(r_t4, abs(J[i, i] - J[j, i]))
    rep.add("diagonal dominates its column", v1 == 0, v1)
    rep.add("strict gap implies no path", v2 == 0, v2)
    rep.add("positive strict gap implies non-basis row", v3 == 0, v3)
    rep.add("positive entry equalizes column", r_t4 < tol, r_t4)

    # restriction to a bicomponent, and arc re-weighting inside K+ \ K
    rc1 = 0.0
    rc2 = 0.0
    for K, Kp in zip(dec.basis_bicomponents, dec.k_plus):
        Ks = sorted(K)
        JK = normalized_forest_matrix(WeightedDigraph(W[np.ix_(Ks, Ks)]))
        rc1 = max(rc1, float(np.abs(JK - J[np.ix_(Ks, Ks)]).max()))
        W2 = W.copy()
        changed = False
        for u in Kp:
            for w_ in Kp - K:
                if W2[w_, u] > 0:  # arc u -> w_
                    W2[w_, u] *= 1.75
                    changed = True
        if changed:
            rc2 = max(rc2, float(np.abs(normalized_forest_matrix(WeightedDigraph(W2)) - J).max()))
    rep.add("bicomponent submatrix", rc1 < tol, rc1)
    rep.add("reweighting invariance", rc2 < tol, rc2)
    return rep
