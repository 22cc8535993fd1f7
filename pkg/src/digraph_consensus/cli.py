"""Command-line entry point: ``digraph-consensus <subcommand> ...``.

Subcommands: ``analyze``, ``simulate``, ``spectrum``, ``atlas``, ``fuzz``.
Reports are JSON on stdout (``--human`` for a text summary).  Exit status is
0 on success, 1 when a proven property fails a check, 2 on input or usage
errors.  Conjecture violations found by ``fuzz`` do not change the exit code.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .dynamics import (
    SimConfig,
    convergence_report,
    simulate_continuous,
    simulate_discrete,
    simulate_double_integrator,
    simulate_oscillator,
)
from .forests import ENUMERATION_MAX_N, enumerate_max_out_forests, normalized_forest_matrix, forest_matrix_audit
from .fuzz import fuzz
from .graph import GraphFormatError, WeightedDigraph, build_laplacian, max_step_size, standardize
from .spectral import (
    band_bound,
    char_poly_identity_check,
    cycloid_samples,
    eigenvalues,
    h_exact,
    multiplicity_audit,
    polygon_contains,
    polygon_vertices,
    region_contains,
    semiconvergence_check,
    spectrum_correspondence,
)
from .structure import decompose, forest_dimension, has_spanning_diverging_tree, laplacian_rank

SAMPLE_POINTS = (2.0, -1.0, 0.5 + 0.5j, 1.5j, 0.5 - 0.7j)

FIELDS = {
    "zero": (lambda x: np.zeros_like(x), 0.0),
    "decay": (lambda x: -x, 1.0),
    "sin": (np.sin, 1.0),
}


class CLIError(Exception):
    pass


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _dump(obj: Any) -> str:
    # float repr is the shortest string that round-trips exactly
    return json.dumps(_jsonable(obj), indent=1, sort_keys=False)


def _read_graph(path: str) -> WeightedDigraph:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return WeightedDigraph.from_json(text)
    except GraphFormatError as exc:
        raise CLIError(f"{path}: {exc}") from None


def _vector(text: str | None, n: int, default: np.ndarray, name: str) -> np.ndarray:
    if text is None:
        return default
    try:
        v = np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise CLIError(f"--{name}: expected {n} comma-separated numbers") from None
    if v.shape != (n,):
        raise CLIError(f"--{name}: expected {n} values, got {v.size}")
    return v


def _manifest(args: argparse.Namespace, outputs: Sequence[str] = ()) -> dict[str, Any]:
    return {
        "subcommand": args.command,
        "inputs": [args.input] if getattr(args, "input", None) else [],
        "outputs": list(outputs),
        "seed": getattr(args, "seed", None),
        "tol": getattr(args, "tol", None),
        "format": getattr(args, "format", "json"),
        "version": __version__,
    }


def _emit(args: argparse.Namespace, report: dict[str, Any], human: str) -> None:
    if args.human:
        print(human)
    else:
        print(_dump(report))


def cmd_analyze(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    dec = decompose(g)
    fd = forest_dimension(g)
    report: dict[str, Any] = {
        "manifest": _manifest(args),
        "n": g.n,
        "components": dec.to_dict(),
        "d": fd.d,
        "max_forest_arc_count": fd.max_forest_arc_count,
        "rank": laplacian_rank(g),
        "spanning_diverging_tree": has_spanning_diverging_tree(g),
    }
    ok = True
    if g.n <= ENUMERATION_MAX_N:
        fam = enumerate_max_out_forests(g)
        audit = forest_matrix_audit(g, tol=args.tol)
        report["forests"] = {"count": len(fam.forests), "sigma": fam.sigma}
        if args.forests:
            report["forests"]["list"] = fam.to_dict()["forests"]
        report["J"] = normalized_forest_matrix(g)
        report["audit"] = {k: v for k, v in audit.to_dict().items() if k != "data"}
        ok = audit.passed
    else:
        report["J"] = None
        report["note"] = f"forest matrix needs n <= {ENUMERATION_MAX_N}"
    human = "\n".join(
        [
            f"n={g.n} d={fd.d} rank={report['rank']} spanning tree: {report['spanning_diverging_tree']}",
            f"basis bicomponents: {report['components']['basis_bicomponents']}",
        ]
        + ([f"J =\n{np.array2string(np.asarray(report['J']), precision=6)}"] if report["J"] is not None else [])
    )
    _emit(args, report, human)
    return 0 if ok else 1


def cmd_simulate(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    n = g.n
    x0 = _vector(args.x0, n, np.arange(1.0, n + 1), "x0")
    L = build_laplacian(g)
    try:
        if args.model == "discrete":
            eps = args.eps if args.eps is not None else 0.5 * max_step_size(L)
            if not math.isfinite(eps):
                raise CLIError("--eps required for an arcless digraph")
            traj = simulate_discrete(g, x0, eps, args.steps)
        else:
            cfg = SimConfig(dt=args.dt, t_end=args.t_end, gamma=args.gamma, tol=args.tol)
            if args.model == "continuous":
                traj = simulate_continuous(g, x0, cfg)
            elif args.model == "oscillator":
                f, lip = FIELDS[args.field]
                traj = simulate_oscillator(g, f, args.gamma, x0, cfg, lipschitz=lip)
            else:
                v0 = _vector(args.v0, n, np.zeros(n), "v0")
                traj = simulate_double_integrator(g, args.gamma, x0, v0, cfg)
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    verdict = convergence_report(traj, args.tol)
    outputs = []
    if args.output:
        text = traj.to_csv() if args.format == "csv" else traj.to_json()
        Path(args.output).write_text(text)
        outputs.append(args.output)
    report: dict[str, Any] = {
        "manifest": _manifest(args, outputs),
        "model": args.model,
        "prediction": "tree exists" if verdict.predicted else "no spanning diverging tree",
        **verdict.to_dict(),
        "final_state": traj.final,
        "horizon": float(traj.times[-1]),
    }
    if not args.output and args.format == "json":
        report["trajectory"] = traj.to_dict()
    if not args.output and args.format == "csv":
        sys.stdout.write(traj.to_csv())
        print(_dump(report), file=sys.stderr)
        return 0
    human = f"{args.model}: {verdict.verdict} (final disagreement {verdict.final_disagreement:.3e}); prediction: {report['prediction']}"
    _emit(args, report, human)
    return 0


def cmd_spectrum(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    n = g.n
    b = args.b if args.b is not None else (float(g.weights.max()) or 1.0)
    try:
        lt = standardize(g, b)
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    sp = eigenvalues(lt)
    in_region = region_contains(n, sp.values) if n >= 2 else np.array([True])
    in_poly = polygon_contains(n, sp.values) if n >= 2 else np.array([True])
    audits = [
        spectrum_correspondence(lt),
        char_poly_identity_check(lt, SAMPLE_POINTS),
        multiplicity_audit(lt),
        semiconvergence_check(lt),
    ]
    hb = h_exact(n) if n >= 2 else None
    report = {
        "manifest": _manifest(args),
        "n": n,
        "b": b,
        "eigenvalues": [
            {"value": z, "in_region": bool(r), "in_polygon": bool(p)}
            for z, r, p in zip(sp.values, np.atleast_1d(in_region), np.atleast_1d(in_poly))
        ],
        "max_imag": float(sp.values.imag.max()),
        "band_bound": band_bound(n) if n >= 2 else None,
        "h": None if hb is None else {"value": hb.value, "kind": hb.kind, "band_bound": hb.band_bound},
        "audits": [{k: v for k, v in a.to_dict().items() if k != "data"} for a in audits],
    }
    ok = bool(np.all(in_region)) and all(a.passed for a in audits)
    human = "\n".join(
        [f"n={n} b={b} band bound={report['band_bound']}"]
        + [f"  {z.real:+.6f}{z.imag:+.6f}i region={bool(r)} polygon={bool(p)}" for z, r, p in zip(sp.values, np.atleast_1d(in_region), np.atleast_1d(in_poly))]
        + [str(a) for a in audits]
    )
    _emit(args, report, human)
    return 0 if ok else 1


def cmd_atlas(args: argparse.Namespace) -> int:
    out = Path(args.output or ".")
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for n in args.n:
        if n < 2:
            raise CLIError(f"--n: order must be at least 2, got {n}")
        path = out / f"polygon_n{n}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "k", "re", "im"])
            for row in polygon_vertices(n).rows():
                w.writerow([row[0], row[1], format(row[2], ".17g"), format(row[3], ".17g")])
        written.append(str(path))
    path = out / "cycloid.csv"
    count = args.count
    tau = np.linspace(0.0, 2 * math.pi, count)
    pts = cycloid_samples(2 * count)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["tau", "re", "im", "sign"])
        for sign, half in ((1, pts[:count]), (-1, pts[count:])):
            for t, z in zip(tau, half):
                w.writerow([format(t, ".17g"), format(z.real, ".17g"), format(z.imag, ".17g"), sign])
    written.append(str(path))
    report = {"manifest": _manifest(args, written), "files": written}
    _emit(args, report, "\n".join(written))
    return 0


def cmd_fuzz(args: argparse.Namespace) -> int:
    if args.count < 1:
        raise CLIError("--count must be >= 1")
    if args.n < 2:
        raise CLIError("--n must be >= 2")
    res = fuzz(args.n, args.count, seed=args.seed, b=args.b or 1.0, workers=args.workers)
    outputs = []
    target = args.output
    if target is None and (res.polygon_violations or res.region_violations):
        # findings are never dropped: fall back to a replayable file in the working directory
        target = f"fuzz_findings_n{args.n}_seed{args.seed}.json"
    if target:
        Path(target).write_text(res.to_json())
        outputs.append(target)
    report = {"manifest": _manifest(args, outputs), **res.summary()}
    s = res.summary()
    human = (
        f"n={s['n']} count={s['count']} region violations={s['region_violations']} "
        f"polygon violations={s['polygon_violations']} max Im={s['max_imag']:.6f} h={s['h']:.6f}"
    )
    _emit(args, report, human)
    return 1 if res.region_violations else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="digraph-consensus", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, needs_input: bool = True) -> None:
        if needs_input:
            sp.add_argument("--input", "-i", required=True, help="digraph JSON file ('-' for stdin)")
        sp.add_argument("--output", "-o", help="output path")
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--human", action="store_true", help="print a text summary instead of JSON")

    a = sub.add_parser("analyze", help="components, forest dimension, rank, forest matrix")
    common(a)
    a.add_argument("--forests", action="store_true", help="list every maximum out-forest")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="run a consensus model")
    common(s)
    s.set_defaults(tol=1e-6)
    s.add_argument("--model", choices=["continuous", "discrete", "oscillator", "double-integrator"], default="continuous")
    s.add_argument("--eps", type=float, help="step size of the discrete model")
    s.add_argument("--steps", type=int, default=100, help="iterations of the discrete model")
    s.add_argument("--gamma", type=float, default=1.0)
    s.add_argument("--t-end", type=float, dest="t_end")
    s.add_argument("--dt", type=float, default=1e-2)
    s.add_argument("--x0", help="comma-separated initial states (default 1..n)")
    s.add_argument("--v0", help="comma-separated initial velocities (double integrator)")
    s.add_argument("--field", choices=sorted(FIELDS), default="zero", help="oscillator self-dynamics f")
    s.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("spectrum", help="eigenvalues, localization and spectral audits")
    common(sp)
    sp.add_argument("--b", type=float, help="class bound (default: largest weight)")
    sp.set_defaults(func=cmd_spectrum)

    at = sub.add_parser("atlas", help="polygon vertices and cycloid samples as CSV")
    common(at, needs_input=False)
    at.add_argument("--n", type=int, nargs="+", required=True)
    at.add_argument("--count", type=int, default=201, help="cycloid samples per arc")
    at.set_defaults(func=cmd_atlas)

    fz = sub.add_parser("fuzz", help="random search against the polygon conjecture")
    common(fz, needs_input=False)
    fz.add_argument("--n", type=int, required=True)
    fz.add_argument("--count", type=int, default=10_000)
    fz.add_argument("--b", type=float, default=1.0)
    fz.add_argument("--workers", type=int, default=1)
    fz.set_defaults(func=cmd_fuzz)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
