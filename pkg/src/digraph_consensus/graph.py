"""Weighted communication digraphs and the matrices built from them.

Orientation convention: ``weights[i, j] = a_ij`` is the weight agent ``i``
assigns to agent ``j``, and the communication digraph carries the arc
``j -> i`` whenever ``a_ij > 0``.  With this convention the matrix returned by
:func:`build_laplacian` is the Kirchhoff matrix of the digraph.  (If one
instead draws the arc ``i -> j`` the same matrix is called the Laplacian of
that reversed digraph; that convention is not used anywhere in this package.)

All matrices are dense ``numpy`` arrays.  Vertex ids are 0-based in the Python
API and 1-based in the JSON exchange format.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

__all__ = [
    "GraphFormatError",
    "WeightedDigraph",
    "PerronMatrix",
    "averaging_matrix",
    "centering_matrix",
    "build_laplacian",
    "standardize",
    "check_standardized",
    "complement",
    "max_step_size",
    "perron_from_laplacian",
    "perron_from_standardized",
    "digraph_from_laplacian",
    "random_digraph",
]

STRUCT_TOL = 1e-12


class GraphFormatError(ValueError):
    """Raised when a digraph description cannot be ingested."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class WeightedDigraph:
    """Digraph on ``n`` vertices given by its nonnegative weight matrix.

    ``weights[i, j] > 0`` means arc ``j -> i`` with that weight.
    """

    weights: np.ndarray
    n: int = field(init=False)

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise GraphFormatError(f"weights must be a nonempty square matrix, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise GraphFormatError("weights must be finite")
        if np.any(w < 0):
            raise GraphFormatError("weights must be nonnegative")
        if np.any(np.diag(w) != 0):
            raise GraphFormatError("self-loops are not allowed (a_ii must be 0)")
        object.__setattr__(self, "weights", _frozen(w))
        object.__setattr__(self, "n", w.shape[0])

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[float]]) -> "WeightedDigraph":
        """Build from ``(j, i, w)`` triples, 0-based, each meaning arc ``j -> i``."""
        w = np.zeros((n, n))
        for j, i, wt in edges:
            w[int(i), int(j)] = wt
        return cls(w)

    @classmethod
    def empty(cls, n: int) -> "WeightedDigraph":
        return cls(np.zeros((n, n)))

    @classmethod
    def complete(cls, n: int, b: float = 1.0) -> "WeightedDigraph":
        return cls(b * (np.ones((n, n)) - np.eye(n)))

    @classmethod
    def cycle(cls, n: int, b: float = 1.0) -> "WeightedDigraph":
        """Hamiltonian cycle ``0 -> 1 -> ... -> n-1 -> 0``."""
        return cls.from_edges(n, [(v, (v + 1) % n, b) for v in range(n)])

    @property
    def adjacency(self) -> np.ndarray:
        """Boolean matrix ``adj[j, i]`` true iff arc ``j -> i``."""
        return (self.weights > 0).T

    def arcs(self) -> list[tuple[int, int, float]]:
        """Arcs as ``(tail, head, weight)`` triples, 0-based, sorted."""
        heads, tails = np.nonzero(self.weights)
        return sorted((int(j), int(i), float(self.weights[i, j])) for i, j in zip(heads, tails))

    def in_neighbors(self, i: int) -> list[int]:
        return [int(j) for j in np.flatnonzero(self.weights[i])]

    def relabel(self, perm: Sequence[int]) -> "WeightedDigraph":
        """Digraph whose vertex ``perm[v]`` plays the role of old vertex ``v``."""
        perm = np.asarray(perm)
        inv = np.argsort(perm)
        return WeightedDigraph(self.weights[np.ix_(inv, inv)])

    def to_dict(self, form: str = "edges") -> dict[str, Any]:
        if form == "edges":
            return {"n": self.n, "edges": [[j + 1, i + 1, w] for j, i, w in self.arcs()]}
        if form == "weights":
            return {"n": self.n, "weights": self.weights.tolist()}
        raise ValueError(f"unknown form {form!r}")

    def to_json(self, form: str = "edges") -> str:
        return json.dumps(self.to_dict(form))

    @classmethod
    def from_dict(cls, obj: Any) -> "WeightedDigraph":
        """Parse the JSON object form (1-based vertex ids)."""
        if not isinstance(obj, dict):
            raise GraphFormatError("top level must be a JSON object")
        if "n" not in obj:
            raise GraphFormatError("field 'n': missing")
        n = obj["n"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise GraphFormatError(f"field 'n': expected a positive integer, got {n!r}")
        has_edges, has_weights = "edges" in obj, "weights" in obj
        if has_edges == has_weights:
            raise GraphFormatError("exactly one of 'edges' or 'weights' must be given")
        if has_weights:
            try:
                w = np.array(obj["weights"], dtype=float)
            except (TypeError, ValueError) as exc:
                raise GraphFormatError(f"field 'weights': {exc}") from None
            if w.shape != (n, n):
                raise GraphFormatError(f"field 'weights': expected shape ({n}, {n}), got {w.shape}")
            return cls(w)
        edges = obj["edges"]
        if not isinstance(edges, list):
            raise GraphFormatError("field 'edges': expected a list")
        w = np.zeros((n, n))
        for idx, e in enumerate(edges):
            where = f"field 'edges[{idx}]'"
            if not isinstance(e, list) or len(e) != 3:
                raise GraphFormatError(f"{where}: expected [tail, head, weight]")
            j, i, wt = e
            for name, v in (("tail", j), ("head", i)):
                if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= n:
                    raise GraphFormatError(f"{where}: {name} must be an integer in 1..{n}, got {v!r}")
            if isinstance(wt, bool) or not isinstance(wt, (int, float)):
                raise GraphFormatError(f"{where}: weight must be a number, got {wt!r}")
            if not math.isfinite(wt) or wt < 0:
                raise GraphFormatError(f"{where}: weight must be finite and nonnegative, got {wt!r}")
            if i == j:
                raise GraphFormatError(f"{where}: self-loop at vertex {i}")
            if w[i - 1, j - 1] != 0:
                raise GraphFormatError(f"{where}: duplicate arc {j} -> {i}")
            w[i - 1, j - 1] = wt
        return cls(w)

    @classmethod
    def from_json(cls, text: str) -> "WeightedDigraph":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(obj)


def averaging_matrix(n: int) -> np.ndarray:
    """The matrix with every entry ``1/n``."""
    return np.full((n, n), 1.0 / n)


def centering_matrix(n: int) -> np.ndarray:
    """``I - averaging_matrix(n)``; the standardized Laplacian of the complete digraph."""
    return np.eye(n) - averaging_matrix(n)


def build_laplacian(g: WeightedDigraph) -> np.ndarray:
    """Kirchhoff matrix: ``-a_ij`` off the diagonal, row out-weights on it."""
    L = -np.array(g.weights)
    np.fill_diagonal(L, g.weights.sum(axis=1))
    return L


def standardize(g: WeightedDigraph, b: float) -> np.ndarray:
    """Standardized Laplacian ``L / (n b)`` of ``g`` in the class of digraphs with weights <= b."""
    if not b > 0:
        raise ValueError(f"class bound b must be positive, got {b}")
    wmax = float(g.weights.max())
    if wmax > b:
        raise ValueError(f"arc weight {wmax} exceeds class bound b={b}")
    return build_laplacian(g) / (g.n * b)


def check_standardized(M: np.ndarray, tol: float = STRUCT_TOL) -> np.ndarray:
    """Validate a standardized Laplacian and return it as a float array."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("standardized Laplacian must be square")
    n = M.shape[0]
    if not np.all(np.isfinite(M)):
        raise ValueError("standardized Laplacian must be finite")
    if np.abs(M.sum(axis=1)).max() > tol:
        raise ValueError("row sums must vanish")
    off = M[~np.eye(n, dtype=bool)]
    if off.size and (off.max() > tol or off.min() < -1.0 / n - tol):
        raise ValueError(f"off-diagonal entries must lie in [-1/{n}, 0]")
    return M


def complement(lt: np.ndarray) -> np.ndarray:
    """Standardized Laplacian of the complementary digraph, ``K - lt``.

    An arc of weight ``w`` becomes weight ``b - w``; missing arcs get weight ``b``.
    """
    lt = check_standardized(lt)
    return centering_matrix(lt.shape[0]) - lt


def max_step_size(L: np.ndarray) -> float:
    """Largest step ``eps`` for which ``I - eps L`` stays row stochastic."""
    dmax = float(np.max(np.diag(L)))
    return math.inf if dmax <= 0 else 1.0 / dmax


@dataclass(frozen=True)
class PerronMatrix:
    matrix: np.ndarray
    eps: float | None = None
    at_endpoint: bool = False


def perron_from_laplacian(L: np.ndarray, eps: float) -> PerronMatrix:
    """``P = I - eps L``; rejects steps outside ``(0, max_step_size(L)]``."""
    L = np.asarray(L, dtype=float)
    bound = max_step_size(L)
    if not eps > 0:
        raise ValueError(f"step size must be positive, got eps={eps}")
    at_end = math.isfinite(bound) and abs(eps - bound) <= STRUCT_TOL * bound
    if eps > bound and not at_end:
        raise ValueError(f"step size eps={eps} exceeds the admissible bound {bound:.17g}")
    P = np.eye(L.shape[0]) - eps * L
    if at_end:
        # snap the diagonal entries that should vanish exactly
        diag = np.diag(P).copy()
        diag[np.abs(diag) < STRUCT_TOL] = 0.0
        np.fill_diagonal(P, diag)
    return PerronMatrix(_frozen(P), float(eps), bool(at_end))


def perron_from_standardized(lt: np.ndarray) -> PerronMatrix:
    """``P = lt + J``, the stochastic companion of a standardized Laplacian."""
    lt = check_standardized(lt)
    return PerronMatrix(_frozen(lt + averaging_matrix(lt.shape[0])))


def digraph_from_laplacian(M: np.ndarray, tol: float = STRUCT_TOL) -> WeightedDigraph:
    """Recover the digraph (weights ``-M_ij``) underlying a Laplacian-type matrix.

    Off-diagonal entries within ``tol`` of zero are treated as absent arcs.
    """
    M = np.asarray(M, dtype=float)
    w = -M.copy()
    np.fill_diagonal(w, 0.0)
    w[w <= tol * max(1.0, float(np.abs(M).max(initial=0.0)))] = 0.0
    return WeightedDigraph(w)


def random_digraph(
    n: int,
    rng: np.random.Generator,
    density: float | None = None,
    b: float = 1.0,
) -> WeightedDigraph:
    """Random digraph: each arc present with probability ``density``.

    When ``density`` is None it is drawn uniformly from (0.1, 0.9).  Present
    arcs get weights uniform in ``(0, b]``.
    """
    p = rng.uniform(0.1, 0.9) if density is None else density
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    w = b - rng.uniform(0.0, b, size=(n, n))  # (0, b]
    return WeightedDigraph(np.where(mask, w, 0.0))
