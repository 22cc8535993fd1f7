"""Random search for standardized Laplacians with eigenvalues outside ``S(n)``.

Instance ``index`` of a run with base ``seed`` draws from
``numpy.random.default_rng([seed, n, index])``: an arc density ``p`` uniform in
(0.1, 0.9), each ordered pair an arc with probability ``p``, arc weights
uniform in ``(0, b]``.  Any instance can therefore be rebuilt from
``(seed, n, index, b)`` alone with :func:`instance`.

Every eigenvalue must lie in the localization region (a failure there is a
bug).  Eigenvalues outside the polygon ``S(n)`` would contradict the open
conjecture and are collected as findings.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .graph import WeightedDigraph, random_digraph, standardize
from .spectral import h_exact, polygon_contains, region_contains

__all__ = ["Finding", "FuzzResult", "instance", "fuzz"]


def instance(seed: int, n: int, index: int, b: float = 1.0) -> WeightedDigraph:
    rng = np.random.default_rng([seed, n, index])
    return random_digraph(n, rng, b=b)


@dataclass(frozen=True)
class Finding:
    kind: str  # "region" or "polygon"
    seed: int
    n: int
    index: int
    b: float
    weights: list[list[float]]
    eigenvalue: complex

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "n": self.n,
            "index": self.index,
            "b": self.b,
            "weights": self.weights,
            "eigenvalue": [self.eigenvalue.real, self.eigenvalue.imag],
        }


@dataclass
class FuzzResult:
    n: int
    count: int
    seed: int
    b: float
    max_imag: float = 0.0
    max_imag_index: int = -1
    region_violations: list[Finding] = field(default_factory=list)
    polygon_violations: list[Finding] = field(default_factory=list)

    @property
    def h(self) -> float:
        return h_exact(self.n).value

    def summary(self) -> dict[str, Any]:
        hb = h_exact(self.n)
        return {
            "n": self.n,
            "count": self.count,
            "seed": self.seed,
            "b": self.b,
            "region_violations": len(self.region_violations),
            "polygon_violations": len(self.polygon_violations),
            "max_imag": self.max_imag,
            "max_imag_index": self.max_imag_index,
            "h": hb.value,
            "h_kind": hb.kind,
            "band_bound": hb.band_bound,
            "gap_to_h": hb.value - self.max_imag,
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "summary": self.summary(),
            "region_violations": [f.to_dict() for f in self.region_violations],
            "polygon_violations": [f.to_dict() for f in self.polygon_violations],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


def _batch(seed: int, n: int, b: float, lo: int, hi: int):
    idx = np.arange(lo, hi)
    graphs = [instance(seed, n, int(i), b) for i in idx]
    mats = np.stack([standardize(g, b) for g in graphs])
    vals = np.linalg.eigvals(mats)
    in_region = region_contains(n, vals)
    in_poly = polygon_contains(n, vals)
    return idx, graphs, vals, in_region, in_poly


def fuzz(n: int, count: int, seed: int = 0, b: float = 1.0, workers: int = 1, chunk: int = 1000) -> FuzzResult:
    """Check ``count`` random standardized Laplacians of order ``n``.

    Work is split into chunks that may run on ``workers`` threads; results are
    merged in index order, so the outcome does not depend on ``workers``.
    """
    if n < 2:
        raise ValueError("order must be at least 2")
    if count < 1:
        raise ValueError("count must be >= 1")
    bounds = [(lo, min(lo + chunk, count)) for lo in range(0, count, chunk)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda bd: _batch(seed, n, b, *bd), bounds))
    else:
        parts = [_batch(seed, n, b, *bd) for bd in bounds]

    res = FuzzResult(n, count, seed, b, max_imag=-math.inf)
    for idx, graphs, vals, in_region, in_poly in parts:
        im = vals.imag.max(axis=1)
        k = int(np.argmax(im))
        if im[k] > res.max_imag:
            res.max_imag, res.max_imag_index = float(im[k]), int(idx[k])
        for kind, ok, sink in (("region", in_region, res.region_violations), ("polygon", in_poly, res.polygon_violations)):
            for r, c in zip(*np.nonzero(~ok)):
                sink.append(
                    Finding(kind, seed, n, int(idx[r]), b, graphs[r].weights.tolist(), complex(vals[r, c]))
                )
    return res
