"""Simulation of consensus dynamics on a fixed communication digraph.

Four models are provided:

* first-order continuous protocol ``x' = -L x``;
* iterative protocol ``x(k+1) = (I - eps L) x(k)``;
* coupled scalar systems ``x_i' = f(x_i) - gamma sum_j a_ij (x_i - x_j)``;
* double-integrator consensus
  ``x_i'' = -sum_j a_ij ((x_i - x_j) + gamma (x_i' - x_j'))``.

Continuous models use fixed-step classical RK4.  For the two linear models the
RK4 step is the matrix polynomial ``R(hA) = I + hA + (hA)^2/2 + (hA)^3/6 +
(hA)^4/24`` applied to the state, which is the same update as four stage
evaluations; recorded states are ``R^s x`` with ``s`` steps between records.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .graph import WeightedDigraph, build_laplacian, perron_from_laplacian
from .structure import has_spanning_diverging_tree

__all__ = [
    "SimulationError",
    "SimConfig",
    "Trajectory",
    "Verdict",
    "disagreement",
    "default_horizon",
    "rk4_step_matrix",
    "simulate_continuous",
    "simulate_discrete",
    "simulate_oscillator",
    "simulate_double_integrator",
    "convergence_report",
]

MAX_RECORDS = 2000


class SimulationError(RuntimeError):
    def __init__(self, message: str, t: float | None = None):
        super().__init__(message if t is None else f"{message} at t={t:.17g}")
        self.t = t


@dataclass(frozen=True)
class SimConfig:
    """Integration settings.

    ``t_end=None`` picks ``20 / (smallest positive real part of a Laplacian
    eigenvalue)``; the double integrator uses the eigenvalues of its own
    ``2n x 2n`` system matrix instead.  ``record_every`` is the number of integration steps
    between stored states (chosen automatically when None).
    """

    dt: float = 1e-2
    t_end: float | None = None
    gamma: float = 1.0
    tol: float = 1e-6
    record_every: int | None = None

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_end is not None and not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.record_every is not None and self.record_every < 1:
            raise ValueError("record_every must be >= 1")


def disagreement(states: np.ndarray) -> np.ndarray:
    """``max_i x_i - min_i x_i`` per row."""
    states = np.atleast_2d(states)
    return states.max(axis=1) - states.min(axis=1)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    velocities: np.ndarray | None = None
    model: str = ""
    graph: WeightedDigraph | None = field(default=None, repr=False)
    disagreement: np.ndarray = field(init=False)
    velocity_disagreement: np.ndarray | None = field(init=False)

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.atleast_2d(np.asarray(self.states, dtype=float))
        if self.states.shape[0] != self.times.shape[0]:
            raise ValueError("one state per time required")
        if self.times.size > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        self.disagreement = disagreement(self.states)
        self.velocity_disagreement = None
        if self.velocities is not None:
            self.velocities = np.atleast_2d(np.asarray(self.velocities, dtype=float))
            if self.velocities.shape != self.states.shape:
                raise ValueError("velocities must match states")
            self.velocity_disagreement = disagreement(self.velocities)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def to_csv(self) -> str:
        n = self.states.shape[1]
        header = ["t"] + [f"x_{i + 1}" for i in range(n)]
        if self.velocities is not None:
            header += [f"v_{i + 1}" for i in range(n)]
        header.append("disagreement")
        if self.velocity_disagreement is not None:
            header.append("velocity_disagreement")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for k, t in enumerate(self.times):
            row = [t, *self.states[k]]
            if self.velocities is not None:
                row += list(self.velocities[k])
            row.append(self.disagreement[k])
            if self.velocity_disagreement is not None:
                row.append(self.velocity_disagreement[k])
            w.writerow([format(float(v), ".17g") for v in row])
        return buf.getvalue()

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "model": self.model,
            "times": self.times.tolist(),
            "states": self.states.tolist(),
            "disagreement": self.disagreement.tolist(),
        }
        if self.velocities is not None:
            out["velocities"] = self.velocities.tolist()
            out["velocity_disagreement"] = self.velocity_disagreement.tolist()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _check_x0(g: WeightedDigraph, x0, name: str = "x0") -> np.ndarray:
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (g.n,):
        raise ValueError(f"{name} must have length {g.n}, got shape {x0.shape}")
    if not np.all(np.isfinite(x0)):
        raise ValueError(f"{name} must be finite")
    return x0


def default_horizon(L: np.ndarray, factor: float = 20.0) -> float:
    """``factor / min{Re(lambda) : Re(lambda) > 0}`` over Laplacian eigenvalues."""
    re = np.linalg.eigvals(L).real
    scale = max(1.0, float(np.abs(L).max(initial=0.0)))
    pos = re[re > 1e-9 * scale]
    if pos.size == 0:
        raise ValueError("Laplacian has no eigenvalue with positive real part; give t_end explicitly")
    return factor / float(pos.min())


def rk4_step_matrix(A: np.ndarray, h: float) -> np.ndarray:
    """One classical RK4 step for ``y' = A y``."""
    n = A.shape[0]
    hA = h * A
    hA2 = hA @ hA
    return np.eye(n) + hA + hA2 / 2 + hA2 @ hA / 6 + hA2 @ hA2 / 24


def _grid(t_end: float, dt: float, record_every: int | None) -> tuple[int, float, int]:
    steps = max(1, math.ceil(t_end / dt - 1e-9))
    h = t_end / steps
    if record_every is None:
        record_every = max(1, math.ceil(steps / MAX_RECORDS))
    return steps, h, record_every


def _propagate_linear(A: np.ndarray, y0: np.ndarray, t_end: float, dt: float, record_every: int | None):
    steps, h, s = _grid(t_end, dt, record_every)
    R = rk4_step_matrix(A, h)
    Rs = np.linalg.matrix_power(R, s)
    Rrem = np.linalg.matrix_power(R, steps % s) if steps % s else None
    ys = [y0]
    ts = [0.0]
    y = y0
    k = 0
    while k + s <= steps:
        y = Rs @ y
        k += s
        ys.append(y)
        ts.append(k * h)
    if Rrem is not None:
        y = Rrem @ y
        ys.append(y)
        ts.append(steps * h)
    ts[-1] = t_end
    return np.array(ts), np.array(ys)


def _stability_guard(rate: float, dt: float) -> None:
    if dt * rate > 1:
        raise ValueError(f"dt={dt} too large: dt * {rate:.6g} > 1 (use dt <= {1 / rate:.17g})")


def simulate_continuous(g: WeightedDigraph, x0, cfg: SimConfig = SimConfig()) -> Trajectory:
    """Integrate ``x' = -L x``."""
    x0 = _check_x0(g, x0)
    L = build_laplacian(g)
    _stability_guard(float(np.max(np.diag(L))), cfg.dt)
    t_end = cfg.t_end if cfg.t_end is not None else default_horizon(L)
    times, states = _propagate_linear(-L, x0, t_end, cfg.dt, cfg.record_every)
    return Trajectory(times, states, model="continuous", graph=g)


def simulate_discrete(g: WeightedDigraph, x0, eps: float, steps: int) -> Trajectory:
    """Iterate ``x(k+1) = P x(k)`` with the Perron matrix ``P = I - eps L``."""
    x0 = _check_x0(g, x0)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    P = perron_from_laplacian(build_laplacian(g), eps).matrix
    states = np.empty((steps + 1, g.n))
    states[0] = x0
    for k in range(steps):
        states[k + 1] = P @ states[k]
    return Trajectory(np.arange(steps + 1, dtype=float), states, model="discrete", graph=g)


def simulate_oscillator(
    g: WeightedDigraph,
    f: Callable[[np.ndarray], np.ndarray],
    gamma: float,
    x0,
    cfg: SimConfig = SimConfig(),
    lipschitz: float = 0.0,
) -> Trajectory:
    """Integrate ``x_i' = f(x_i) - gamma sum_j a_ij (x_i - x_j)``.

    ``f`` is applied elementwise to the state vector and must accept an
    ndarray.  ``lipschitz`` is the caller's bound on ``|f'|``; it enters the
    step-size guard and is not verified.
    """
    x0 = _check_x0(g, x0)
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    L = gamma * build_laplacian(g)
    _stability_guard(float(np.max(np.diag(L))) + lipschitz, cfg.dt)
    t_end = cfg.t_end if cfg.t_end is not None else default_horizon(L) if np.any(L) else None
    if t_end is None:
        raise ValueError("t_end is required for an arcless digraph")
    steps, h, s = _grid(t_end, cfg.dt, cfg.record_every)

    def rhs(x: np.ndarray) -> np.ndarray:
        return np.asarray(f(x), dtype=float) - L @ x

    x = x0.copy()
    ts, xs = [0.0], [x0]
    with np.errstate(over="raise", invalid="raise"):
        for k in range(1, steps + 1):
            try:
                k1 = rhs(x)
                k2 = rhs(x + h / 2 * k1)
                k3 = rhs(x + h / 2 * k2)
                k4 = rhs(x + h * k3)
                x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            except FloatingPointError:
                raise SimulationError("overflow or invalid value in the vector field", (k - 1) * h) from None
            if not np.all(np.isfinite(x)):
                raise SimulationError("non-finite state", k * h)
            if k % s == 0 or k == steps:
                ts.append(t_end if k == steps else k * h)
                xs.append(x)
    return Trajectory(np.array(ts), np.array(xs), model="oscillator", graph=g)


def simulate_double_integrator(
    g: WeightedDigraph, gamma: float, x0, v0, cfg: SimConfig = SimConfig()
) -> Trajectory:
    """Integrate the second-order protocol as a ``2n``-dimensional linear system."""
    x0 = _check_x0(g, x0)
    v0 = _check_x0(g, v0, "v0")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    n = g.n
    L = build_laplacian(g)
    A = np.block([[np.zeros((n, n)), np.eye(n)], [-L, -gamma * L]])
    _stability_guard(float(np.abs(A).sum(axis=1).max()) / 2, cfg.dt)
    t_end = cfg.t_end
    if t_end is None:
        # slowest decaying mode of the full system, not of L alone
        try:
            t_end = default_horizon(-A)
        except ValueError:
            t_end = default_horizon(L)
    times, y = _propagate_linear(A, np.concatenate([x0, v0]), t_end, cfg.dt, cfg.record_every)
    return Trajectory(times, y[:, :n], velocities=y[:, n:], model="double-integrator", graph=g)


@dataclass(frozen=True)
class Verdict:
    """Outcome of :func:`convergence_report`.

    ``verdict`` is one of ``converged``, ``oscillating``, ``diverged`` or
    ``undecided``.  ``predicted`` is True/False when the digraph is known
    (spanning diverging tree present or not), else None.
    """

    verdict: str
    final_disagreement: float
    predicted: bool | None
    detail: str = ""

    @property
    def consistent(self) -> bool | None:
        if self.predicted is None:
            return None
        return (self.verdict == "converged") == self.predicted

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "final_disagreement": self.final_disagreement,
            "predicted_convergent": self.predicted,
            "consistent": self.consistent,
            "detail": self.detail,
        }


def convergence_report(traj: Trajectory, tol: float = 1e-6, graph: WeightedDigraph | None = None) -> Verdict:
    """Classify the late-time behaviour of the disagreement ``max x - min x``.

    Thresholds (artifact choices): the last quartile of records is the
    window.  *converged*: final disagreement below ``tol`` and not above its
    value at the start of the window.  *diverged*: non-finite, or final value
    above ``1e6`` times the initial one.  *oscillating*: the second half of the
    window keeps at least 99% of the first half's peak (no decay: periodic
    orbits and stalled non-consensus limits).  Otherwise *undecided*.  For
    the double integrator the velocity disagreement is judged as well.
    """
    graph = graph if graph is not None else traj.graph
    predicted = has_spanning_diverging_tree(graph) if graph is not None else None
    series = [traj.disagreement]
    if traj.velocity_disagreement is not None:
        series.append(traj.velocity_disagreement)

    verdicts = []
    for dis in series:
        verdicts.append(_classify(dis, tol))
    order = ["diverged", "oscillating", "undecided", "converged"]
    verdict = min(verdicts, key=order.index)
    final = float(traj.disagreement[-1])
    return Verdict(verdict, final, predicted, detail=" / ".join(verdicts))


def _classify(dis: np.ndarray, tol: float) -> str:
    if not np.all(np.isfinite(dis)):
        return "diverged"
    final = float(dis[-1])
    if final > 1e6 * max(float(dis[0]), tol):
        return "diverged"
    m = len(dis)
    start = max(0, m - max(2, m // 4))
    window = dis[start:]
    if final < tol and final <= window[0] + tol:
        return "converged"
    half = len(window) // 2
    first, second = window[: max(1, half)], window[max(1, half):]
    if second.size and second.max() >= 0.99 * first.max() and final >= tol:
        return "oscillating"
    return "undecided"
