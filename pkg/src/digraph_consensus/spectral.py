"""Spectra of standardized Laplacians and where they can lie.

A standardized Laplacian of order ``n`` has zero row sums and off-diagonal
entries in ``[-1/n, 0]``.  With ``J`` the all-``1/n`` matrix and ``K = I - J``
it comes with a stochastic companion ``P = lt + J`` and a complement
``Lc = K - lt``; away from 0 and 1 their spectra correspond through
``lambda <-> lambda <-> 1 - lambda``.

Every eigenvalue lies in the intersection of two disks, two angles and a
horizontal band (:func:`region_contains`), and is conjectured to lie in the
polygon spanned by the eigenvalues of the circulant family
(:func:`polygon_vertices`).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np
import scipy.linalg

from .graph import (
    WeightedDigraph,
    averaging_matrix,
    centering_matrix,
    check_standardized,
    digraph_from_laplacian,
    standardize,
)
from .report import Report
from .structure import decompose, numerical_rank

__all__ = [
    "Spectrum",
    "eigenvalues",
    "spectrum_correspondence",
    "char_poly",
    "char_poly_identity_check",
    "multiplicity_audit",
    "band_bound",
    "region_contains",
    "polygon_vertex",
    "polygon_vertex_closed_form",
    "PolygonS",
    "polygon_vertices",
    "polygon_contains",
    "CirculantFamily",
    "cyclic_shift",
    "circulant_laplacian",
    "HBound",
    "h_exact",
    "cycloid_boundary",
    "polygon_boundary_samples",
    "cycloid_samples",
    "hausdorff_to_cycloid",
    "semiconvergence_check",
    "hamiltonian_cycle_check",
]

CLUSTER_RADIUS = 1e-6


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of an ``n x n`` matrix, listed with repetition."""

    values: np.ndarray
    n: int

    def multiplicity(self, target: complex, radius: float = CLUSTER_RADIUS) -> int:
        return int(np.sum(np.abs(self.values - target) <= radius))

    def ambiguous_near(self, target: complex, radius: float = CLUSTER_RADIUS) -> bool:
        """True if some eigenvalue sits between ``radius`` and ``2 radius`` from ``target``."""
        dist = np.abs(self.values - target)
        return bool(np.any((dist > radius) & (dist <= 2 * radius)))

    def distance_to(self, z: complex) -> float:
        return float(np.min(np.abs(self.values - z)))

    def clusters(self, radius: float = CLUSTER_RADIUS) -> list[tuple[complex, int]]:
        """Greedy grouping into ``(center, multiplicity)`` pairs."""
        left = list(self.values)
        out = []
        while left:
            z = left.pop(0)
            near = [w for w in left if abs(w - z) <= radius]
            left = [w for w in left if abs(w - z) > radius]
            group = [z] + near
            out.append((complex(np.mean(group)), len(group)))
        return out

    def to_list(self) -> list[list[float]]:
        return [[float(z.real), float(z.imag)] for z in self.values]


def eigenvalues(M: np.ndarray) -> Spectrum:
    """All eigenvalues of a small dense real matrix, sorted by (real, imag).

    Backed by LAPACK ``geev`` (balancing, Hessenberg reduction, shifted QR),
    which returns complex eigenvalues of real input in exact conjugate pairs.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix must be finite")
    try:
        vals = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigenvalue iteration failed: {exc}") from None
    vals = np.asarray(vals, dtype=complex)
    order = np.lexsort((vals.imag, np.round(vals.real, 12)))
    return Spectrum(vals[order], M.shape[0])


def _companions(lt: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = lt.shape[0]
    return lt + averaging_matrix(n), centering_matrix(n) - lt


def _excluded(lam: complex, margin: float) -> bool:
    return abs(lam) <= margin or abs(lam - 1) <= margin


def spectrum_correspondence(lt: np.ndarray, tol: float = 1e-7, margin: float = CLUSTER_RADIUS) -> Report:
    """Match eigenvalues of ``lt`` away from {0, 1} with those of ``P`` and ``Lc``.

    Each eigenvector ``v`` of ``lt`` for ``lambda`` is mapped to
    ``x = (I - J / (1 - lambda)) v``, which must be an eigenvector of ``P``
    for ``lambda`` and of ``Lc`` for ``1 - lambda``.
    """
    lt = check_standardized(lt)
    n = lt.shape[0]
    P, Lc = _companions(lt)
    sp_P = eigenvalues(P)
    sp_Lc = eigenvalues(Lc)
    vals, vecs = np.linalg.eig(lt)
    J = averaging_matrix(n)
    rep = Report("spectrum correspondence")
    worst_val = worst_vec = 0.0
    checked = 0
    for lam, v in zip(vals, vecs.T):
        if _excluded(lam, margin):
            continue
        checked += 1
        worst_val = max(worst_val, sp_P.distance_to(lam), sp_Lc.distance_to(1 - lam))
        x = v - (J @ v) / (1 - lam)
        nx = np.linalg.norm(x)
        if nx == 0:
            worst_vec = math.inf
            continue
        worst_vec = max(
            worst_vec,
            float(np.linalg.norm(P @ x - lam * x) / nx),
            float(np.linalg.norm(Lc @ x - (1 - lam) * x) / nx),
        )
    rep.data["checked_eigenvalues"] = checked
    rep.add("eigenvalue match", worst_val < tol, worst_val, f"{checked} eigenvalues outside {{0, 1}}")
    rep.add("eigenvector map", worst_vec < tol, worst_vec)
    return rep


def char_poly(M: np.ndarray, lam: complex) -> complex:
    """``det(lam I - M)`` through an LU factorization at the point."""
    M = np.asarray(M)
    A = lam * np.eye(M.shape[0]) - M
    with warnings.catch_warnings():
        # an exactly singular factor just means lam is an eigenvalue
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A.astype(complex), check_finite=True)
    sign = (-1) ** int(np.sum(piv != np.arange(len(piv))))
    return complex(sign * np.prod(np.diag(lu)))


def char_poly_identity_check(
    lt: np.ndarray, sample_points: Iterable[complex], tol: float = 1e-6, min_gap: float = 0.1
) -> Report:
    """Relative residuals of the characteristic-polynomial identities linking ``lt``, ``P``, ``Lc``.

    ``f_P(z) = (z - 1)/z f_lt(z)`` and ``f_Lc(z) = (-1)^(n-1) z/(1 - z) f_lt(1 - z)``.
    Sample points closer than ``min_gap`` to 0 or 1 are rejected.
    """
    lt = check_standardized(lt)
    n = lt.shape[0]
    pts = [complex(z) for z in sample_points]
    for z in pts:
        if abs(z) < min_gap or abs(z - 1) < min_gap:
            raise ValueError(f"sample point {z} is within {min_gap} of 0 or 1")
    P, Lc = _companions(lt)
    rep = Report("characteristic polynomial identities")
    r16 = r17 = 0.0
    for z in pts:
        lhs = char_poly(P, z)
        rhs = (z - 1) / z * char_poly(lt, z)
        r16 = max(r16, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))
        lhs = char_poly(Lc, z)
        rhs = (-1) ** (n - 1) * z / (1 - z) * char_poly(lt, 1 - z)
        r17 = max(r17, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))
    rep.add("f_P identity", r16 < tol, r16, f"{len(pts)} points")
    rep.add("f_Lc identity", r17 < tol, r17, f"{len(pts)} points")
    return rep


def _null_space(M: np.ndarray, rtol: float = 1e-8) -> np.ndarray:
    if not np.any(M):
        return np.eye(M.shape[0])
    return scipy.linalg.null_space(M, rcond=rtol)


def multiplicity_audit(lt: np.ndarray, tol: float = 1e-7, radius: float = CLUSTER_RADIUS) -> Report:
    """Multiplicities of 0 and 1 in ``lt``, ``P`` and ``Lc`` against the forest dimensions.

    ``d`` and ``d_c`` are counted structurally (basis bicomponents of the
    digraph of ``lt`` and of its complement).  Semisimplicity is tested by
    rank, and the two vector maps through ``K`` by eigen-residuals.
    """
    lt = check_standardized(lt)
    n = lt.shape[0]
    P, Lc = _companions(lt)
    K = centering_matrix(n)
    d = len(decompose(digraph_from_laplacian(lt)).basis_bicomponents)
    d_c = len(decompose(digraph_from_laplacian(Lc)).basis_bicomponents)
    rep = Report("multiplicities at 0 and 1")
    rep.data.update(d=d, d_c=d_c)
    spectra = {"lt": eigenvalues(lt), "P": eigenvalues(P), "Lc": eigenvalues(Lc)}
    mats = {"lt": lt, "P": P, "Lc": Lc}
    expected = [
        ("lt", 0.0, d),
        ("lt", 1.0, d_c - 1),
        ("P", 0.0, d - 1),
        ("P", 1.0, d_c),
        ("Lc", 1.0, d - 1),
        ("Lc", 0.0, d_c),
    ]
    for name, target, m_exp in expected:
        sp = spectra[name]
        m = sp.multiplicity(target, radius)
        label = f"m_{name}({target:g}) = {m_exp}"
        if sp.ambiguous_near(target, radius):
            rep.add(label, False, m, "ambiguous clustering near target")
            continue
        rep.add(label, m == m_exp, m)
        if m > 0:
            A = mats[name] - target * np.eye(n)
            r1, r2 = numerical_rank(A), numerical_rank(A @ A)
            rep.add(f"semisimple {name} at {target:g}", r1 == n - m and r2 == r1, r1, f"rank={r1}, rank^2={r2}")

    worst = 0.0
    for v in _null_space(lt).T:
        kv = K @ v
        nk = np.linalg.norm(kv)
        if nk > 1e-8 * max(np.linalg.norm(v), 1e-300):
            worst = max(worst, float(np.linalg.norm(P @ kv) / nk), float(np.linalg.norm(Lc @ kv - kv) / nk))
    for x in _null_space(Lc).T:
        kx = K @ x
        nk = np.linalg.norm(kx)
        if nk > 1e-8 * max(np.linalg.norm(x), 1e-300):
            worst = max(worst, float(np.linalg.norm(lt @ kx - kx) / nk), float(np.linalg.norm(P @ x - x) / np.linalg.norm(x)))
    rep.add("K maps kernels into eigenspaces", worst < tol, worst)
    return rep


def band_bound(n: int) -> float:
    """``(1/2n) cot(pi/2n)``, the bound on imaginary parts for order ``n``."""
    return 1.0 / (2 * n * math.tan(math.pi / (2 * n)))


def _cross(a, b):
    # Im(conj(a) b): positive when b is counterclockwise of a
    return (np.conj(a) * b).imag


def region_contains(n: int, z, tol: float = 1e-12):
    """Membership in the eigenvalue-localization region for order ``n``.

    Accepts a scalar or an array of complex points.  The region is the
    intersection of the disks ``|z - 1/n| <= 1 - 1/n`` and
    ``|z - 1 + 1/n| <= 1 - 1/n``, the angle at 1 spanned by rays through
    ``exp(+-2 pi i/n)``, the angle at 0 spanned by rays through
    ``exp(+-(pi/2 - pi/n) i)``, and the band ``|Im z| <= band_bound(n)``.
    Boundary points are included.
    """
    if n < 2:
        raise ValueError("order must be at least 2")
    z = np.asarray(z, dtype=complex)
    r = 1 - 1 / n
    ok = np.abs(z - 1 / n) <= r + tol
    ok &= np.abs(z - (1 - 1 / n)) <= r + tol
    w = z - 1
    up, down = np.exp(2j * math.pi / n) - 1, np.exp(-2j * math.pi / n) - 1
    ok &= _cross(up, w) >= -tol
    ok &= _cross(w, down) >= -tol
    ok &= -w.real >= -tol
    alpha = math.pi / 2 - math.pi / n
    ok &= _cross(np.exp(-1j * alpha), z) >= -tol
    ok &= _cross(z, np.exp(1j * alpha)) >= -tol
    ok &= z.real >= -tol
    ok &= np.abs(z.imag) <= band_bound(n) + tol
    return bool(ok) if ok.ndim == 0 else ok


def polygon_vertex(n: int, k: int) -> complex:
    """``(k - sum_{m=1..k} exp(-2 pi i m/n)) / n``."""
    m = np.arange(1, k + 1)
    return complex((k - np.exp(-2j * np.pi * m / n).sum()) / n)


def polygon_vertex_closed_form(n: int, k: int) -> complex:
    """Same vertex via the sine ratio ``sin(k pi/n)/sin(pi/n)``."""
    ratio = math.sin(k * math.pi / n) / math.sin(math.pi / n)
    return complex((k - ratio * np.exp(-1j * (k + 1) * math.pi / n)) / n)


@dataclass(frozen=True)
class PolygonS:
    n: int
    vertices: np.ndarray  # 0, lambda_1..lambda_{n-2}, 1, conj(lambda_{n-2})..conj(lambda_1)
    indices: tuple[int, ...]

    def rows(self) -> list[tuple[int, int, float, float]]:
        return [(self.n, k, float(z.real), float(z.imag)) for k, z in zip(self.indices, self.vertices)]


def polygon_vertices(n: int) -> PolygonS:
    if n < 2:
        raise ValueError("order must be at least 2")
    upper = [polygon_vertex(n, k) for k in range(1, n - 1)]
    for k, z in enumerate(upper, start=1):
        alt = polygon_vertex_closed_form(n, k)
        if abs(z - alt) > 1e-12:
            raise ArithmeticError(f"vertex formulas disagree at n={n}, k={k}: {z} vs {alt}")
    verts = [0j] + upper + [1 + 0j] + [z.conjugate() for z in reversed(upper)]
    idx = tuple([0] + list(range(1, n - 1)) + [n - 1] + list(range(n - 2, 0, -1)))
    return PolygonS(n, np.array(verts), idx)


def polygon_contains(n: int, z, tol: float = 1e-10):
    """Closed point-in-polygon test for ``S(n)`` (scalar or array input)."""
    z = np.asarray(z, dtype=complex)
    if n == 2:
        ok = (np.abs(z.imag) <= tol) & (z.real >= -tol) & (z.real <= 1 + tol)
        return bool(ok) if ok.ndim == 0 else ok
    V = polygon_vertices(n).vertices
    a = V
    b = np.roll(V, -1)
    # vertices run clockwise (upper chain left to right), so interior points are on the right of every edge
    cr = _cross((b - a)[:, None], z.reshape(-1)[None, :] - a[:, None])
    ok = np.all(cr <= tol, axis=0).reshape(z.shape)
    return bool(ok) if ok.ndim == 0 else ok


def cyclic_shift(n: int) -> np.ndarray:
    """Permutation matrix with ``c[u, u+1 mod n] = 1``."""
    return np.roll(np.eye(n), 1, axis=1)


@dataclass(frozen=True)
class CirculantFamily:
    n: int
    k: int
    matrix: np.ndarray

    def digraph(self, b: float = 1.0) -> WeightedDigraph:
        return digraph_from_laplacian(self.matrix * self.n * b)


def circulant_laplacian(n: int, k: int) -> CirculantFamily:
    """``(k I - C - C^2 - ... - C^k) / n`` with ``C`` the cyclic shift.

    Its spectrum contains the polygon vertex ``lambda_k(n)`` and its conjugate.
    """
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in 1..{n - 1}, got {k}")
    C = cyclic_shift(n)
    acc = np.zeros((n, n))
    Ck = np.eye(n)
    for _ in range(k):
        Ck = Ck @ C
        acc += Ck
    M = (k * np.eye(n) - acc) / n
    M.setflags(write=False)
    return CirculantFamily(n, k, M)


class HBound(NamedTuple):
    """Supremum of imaginary parts for order ``n``.

    ``kind`` is ``"exact"`` for odd ``n``; for even ``n`` the exact supremum
    is unknown, so ``value`` is the largest polygon-vertex imaginary part
    (``kind="vertex_max"``) and ``band_bound`` the proven upper bound.
    """

    value: float
    kind: str
    band_bound: float


def h_exact(n: int) -> HBound:
    if n < 2:
        raise ValueError("order must be at least 2")
    band = band_bound(n)
    if n % 2 == 1:
        return HBound(band, "exact", band)
    return HBound(1.0 / (n * math.tan(math.pi / n)), "vertex_max", band)


def cycloid_boundary(tau: float, sign: int = 1) -> complex:
    """Point ``x(tau) + sign * i y(tau)`` of the limiting two-cycloid curve."""
    if not 0.0 <= tau <= 2 * math.pi:
        raise ValueError(f"tau must lie in [0, 2 pi], got {tau}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    x = (tau - math.sin(tau)) / (2 * math.pi)
    y = (1 - math.cos(tau)) / (2 * math.pi)
    return complex(x, sign * y)


def cycloid_samples(count: int) -> np.ndarray:
    """``count`` points spread over both arcs (upper then lower)."""
    half = count // 2
    tau = np.linspace(0, 2 * math.pi, half)
    x = (tau - np.sin(tau)) / (2 * math.pi)
    y = (1 - np.cos(tau)) / (2 * math.pi)
    tau2 = np.linspace(0, 2 * math.pi, count - half)
    x2 = (tau2 - np.sin(tau2)) / (2 * math.pi)
    y2 = (1 - np.cos(tau2)) / (2 * math.pi)
    return np.concatenate([x + 1j * y, x2 - 1j * y2])


def polygon_boundary_samples(n: int, count: int) -> np.ndarray:
    """``count`` points spread evenly by arc length along the boundary of ``S(n)``."""
    V = polygon_vertices(n).vertices
    closed = np.append(V, V[0])
    seg = np.abs(np.diff(closed))
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    s = np.linspace(0, cum[-1], count, endpoint=False)
    idx = np.searchsorted(cum, s, side="right") - 1
    t = (s - cum[idx]) / seg[idx]
    return closed[idx] + t * (closed[idx + 1] - closed[idx])


def hausdorff_to_cycloid(n: int, count: int = 10_000) -> float:
    """Sampled Hausdorff distance between the boundary of ``S(n)`` and the cycloid curve."""
    from scipy.spatial.distance import directed_hausdorff

    a = polygon_boundary_samples(n, count)
    b = cycloid_samples(count)
    A = np.column_stack([a.real, a.imag])
    B = np.column_stack([b.real, b.imag])
    return max(directed_hausdorff(A, B)[0], directed_hausdorff(B, A)[0])


def _settles(M: np.ndarray, tol: float, max_log2: int) -> tuple[bool, float, int]:
    Mm = M.copy()
    resid = math.inf
    for e in range(max_log2 + 1):
        M2 = Mm @ Mm
        resid = float(np.abs(M2 - Mm).sum(axis=1).max())
        if resid < tol:
            return True, resid, 2**e
        Mm = M2
    return False, resid, 2**max_log2


def semiconvergence_check(lt: np.ndarray, tol: float = 1e-9, max_log2: int = 20) -> Report:
    """Both ``lt^m`` and ``(lt + J)^m`` settle: ``||M^{2m} - M^m||_inf < tol`` for some ``m <= 2^20``."""
    lt = check_standardized(lt)
    P, _ = _companions(lt)
    rep = Report("semiconvergence")
    for name, M in (("lt", lt), ("P", P)):
        ok, resid, m = _settles(M, tol, max_log2)
        rep.add(f"{name}^m converges", ok, resid, f"m={m}")
    return rep


def hamiltonian_cycle_check(n: int, b: float = 1.0, tol: float = 1e-9) -> Report:
    """Eigenvalue with argument ``pi/2 - pi/n`` for the Hamiltonian cycle.

    Exactly one such eigenvalue, bounded modulus and imaginary part, and an
    eigenvector whose components form a regular polygon.
    """
    if n < 3:
        raise ValueError("order must be at least 3")
    g = WeightedDigraph.cycle(n, b)
    lt = standardize(g, b)
    vals, vecs = np.linalg.eig(lt)
    target = math.pi / 2 - math.pi / n
    hits = [i for i, z in enumerate(vals) if abs(z) > 1e-12 and abs(np.angle(z) - target) <= tol]
    rep = Report(f"Hamiltonian cycle n={n}")
    rep.add("unique eigenvalue at angle pi/2 - pi/n", len(hits) == 1, len(hits))
    if len(hits) != 1:
        return rep
    lam = complex(vals[hits[0]])
    v = vecs[:, hits[0]]
    rep.data["eigenvalue"] = [lam.real, lam.imag]
    mod_bound = 2 / n * math.sin(math.pi / n)
    im_bound = math.sin(2 * math.pi / n) / n
    rep.add("|lambda| <= (2/n) sin(pi/n)", abs(lam) <= mod_bound + tol, abs(lam) - mod_bound)
    rep.add("Im lambda <= (1/n) sin(2 pi/n)", lam.imag <= im_bound + tol, lam.imag - im_bound)
    if np.min(np.abs(v)) < 1e-12:
        rep.add("regular polygon eigenvector", False, None, "zero component")
        return rep
    ratios = v[np.r_[1:n, 0]] / v
    spread = float(np.max(np.abs(ratios - ratios[0])))
    rep.add("regular polygon eigenvector", spread <= tol and abs(abs(ratios[0]) - 1) <= tol, spread)
    return rep
