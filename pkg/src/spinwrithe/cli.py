"""Command-line front end.

Subcommands: generate, measure, close, evolve, homotopy, bench. Structured
records go to JSON, series to CSV; identical arguments and inputs produce
byte-identical outputs. Exit codes: 0 ok, 2 usage, 3 validation, 4 I/O,
5 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import curvegeom, dynamics, grid_field, observables, topology, writhe

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_IO = 4
EXIT_NUMERICAL = 5


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _add_grid_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--s-min", type=float, default=-30.0)
    p.add_argument("--s-max", type=float, default=30.0)
    p.add_argument("--n", type=int, default=1024)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinwrithe",
        description="Writhe and conserved quantities of 1D Heisenberg spin fields",
    )
    parser.add_argument("--threads", type=int, default=None, help="threads for the pairwise writhe kernel")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a spin field JSON file")
    g.add_argument("--kind", choices=("ground", "twist", "random"), required=True)
    _add_grid_args(g)
    g.add_argument("--theta0", type=float, default=np.pi / 2)
    g.add_argument("--w", type=float, default=2.0)
    g.add_argument("--dphi", type=float, default=2 * np.pi)
    g.add_argument("--w-phi", type=float, default=1.0)
    g.add_argument("--s0", type=float, default=0.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--modes", type=int, default=8)
    g.add_argument("--amplitude", type=float, default=0.5)
    g.add_argument("--out", required=True)

    m = sub.add_parser("measure", help="observables and writhe of a field")
    m.add_argument("--in", dest="input", required=True)
    m.add_argument("--method", choices=("gauss", "fuller", "angular", "all"), default="all")
    m.add_argument("--coupling", type=float, default=1.0, help="exchange constant J")
    m.add_argument("--radius-factor", type=float, default=curvegeom.DEFAULT_RADIUS_FACTOR)
    m.add_argument("--out", default="-")

    c = sub.add_parser("close", help="reconstruct the space curve and close it")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--radius-factor", type=float, default=curvegeom.DEFAULT_RADIUS_FACTOR)
    c.add_argument("--open", action="store_true", help="export the open curve without closure")
    c.add_argument("--out", required=True, help="CSV path (JSON sidecar written next to it)")

    e = sub.add_parser("evolve", help="Landau-Lifshitz evolution with drift report")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--t-end", type=float, required=True)
    e.add_argument("--dt", type=float, required=True)
    e.add_argument("--record-every", type=int, default=1)
    e.add_argument("--scheme", choices=dynamics.SCHEMES, default="rk4_renorm")
    e.add_argument("--coupling", type=float, default=1.0)
    e.add_argument("--out", required=True, help="CSV path (drift JSON written next to it)")

    h = sub.add_parser("homotopy", help="writhe along a homotopy path, with jump events")
    h.add_argument("--a", dest="field_a", help="start field JSON")
    h.add_argument("--b", dest="field_b", help="end field JSON")
    h.add_argument("--fixture", choices=("loop-passage",), help="use a built-in family instead of --a/--b")
    h.add_argument("--mirror", action="store_true", help="mirror the built-in fixture")
    h.add_argument("--steps", type=int, default=400)
    h.add_argument("--method", choices=topology.PATH_METHODS, default="gauss_closed")
    h.add_argument("--jump-tol", type=float, default=topology.DEFAULT_JUMP_TOL)
    h.add_argument("--radius-factor", type=float, default=curvegeom.DEFAULT_RADIUS_FACTOR)
    h.add_argument("--out", required=True, help="CSV path (jump-event JSON written next to it)")

    b = sub.add_parser("bench", help="time the O(N^2) writhe kernel")
    b.add_argument("--n", type=int, default=4096)
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--out", default="-")
    return parser


def _load_field(path: str) -> grid_field.SpinField:
    try:
        return grid_field.load_field(path)
    except (KeyError, json.JSONDecodeError) as exc:
        raise OSError(f"cannot parse field file {path}: {exc}") from exc


def _cmd_generate(args) -> int:
    grid = grid_field.Grid(args.s_min, args.s_max, args.n)
    if args.kind == "ground":
        f = grid_field.ground_state(grid)
    elif args.kind == "twist":
        f = grid_field.twist_profile(grid, args.theta0, args.w, args.dphi, args.w_phi, args.s0)
    else:
        f = grid_field.random_field(grid, args.seed, args.modes, args.amplitude)
    f = grid_field.SpinField(f.grid, f.theta, f.phi, eps_bc=f.eps_bc, meta={"kind": args.kind})
    if args.out == "-":
        sys.stdout.write(_json_dumps(grid_field.field_to_dict(f)))
    else:
        grid_field.save_field(f, args.out)
    return EXIT_OK


def _cmd_measure(args) -> int:
    f = _load_field(args.input)
    obs = observables.observables(f, args.coupling)
    doc = {
        "H": obs.energy,
        "P": obs.momentum,
        "M": obs.magnetization,
        "Wr": obs.writhe,
        "n_used": f.grid.n,
    }
    reference = grid_field.ground_state(f.grid)
    if args.method in ("angular", "all"):
        doc["angular"] = writhe.writhe_angular(f)
    if args.method in ("fuller", "all"):
        check = writhe.fuller_validity_check(f, reference)
        doc["fuller_hypothesis_ok"] = check.ok
        doc["fuller"] = writhe.writhe_fuller(f, reference) if check.ok else None
    if args.method in ("gauss", "all"):
        curve = curvegeom.close_at_infinity(
            curvegeom.integrate_tangent(f), args.radius_factor
        )
        doc["gauss"] = writhe.writhe_gauss(curve, threads=args.threads)
    try:
        doc["bounds"] = observables.energy_bound_check(f, args.coupling).__dict__
    except ValueError:
        doc["bounds"] = None  # ground state: bound undefined
    _write_text(args.out, _json_dumps(doc))
    return EXIT_OK


def _cmd_close(args) -> int:
    f = _load_field(args.input)
    curve = curvegeom.integrate_tangent(f)
    if not args.open:
        curve = curvegeom.close_at_infinity(curve, args.radius_factor)
    curvegeom.save_curve(curve, args.out)
    return EXIT_OK


def _cmd_evolve(args) -> int:
    f = _load_field(args.input)
    trace = dynamics.evolve(
        f, args.t_end, args.dt, args.record_every, args.scheme, args.coupling
    )
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "H", "P", "M", "Wr"])
        for t, o in zip(trace.times, trace.observables):
            writer.writerow([repr(float(v)) for v in (t, o.energy, o.momentum, o.magnetization, o.writhe)])
    report = dynamics.drift_report(trace)
    _write_text(str(args.out) + ".drift.json", _json_dumps(report.__dict__))
    return EXIT_OK


def _cmd_homotopy(args) -> int:
    if args.fixture == "loop-passage":
        path = topology.loop_passage_family(steps=args.steps, mirror=args.mirror)
    elif args.field_a and args.field_b:
        path = topology.homotopy_path(
            _load_field(args.field_a), _load_field(args.field_b), args.steps
        )
    else:
        raise ValueError("provide either --fixture or both --a and --b")
    series = topology.writhe_along_path(path, args.method, args.radius_factor)
    events = topology.detect_jumps(series, path.lam, args.jump_tol)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "Wr"])
        for lam, w in zip(path.lam, series):
            writer.writerow([repr(float(lam)), repr(float(w))])
    _write_text(str(args.out) + ".jumps.json", _json_dumps([e.__dict__ for e in events]))
    return EXIT_OK


def _helical_closure(n: int) -> curvegeom.SpaceCurve:
    """Standardized benchmark curve: a closed helical loop with n vertices."""
    t = np.linspace(0.0, 1.0, n)
    ang = 2.0 * np.pi * t
    points = np.column_stack(
        (
            (2.0 + 0.5 * np.cos(7 * ang)) * np.cos(ang),
            (2.0 + 0.5 * np.cos(7 * ang)) * np.sin(ang),
            0.5 * np.sin(7 * ang),
        )
    )
    points[-1] = points[0]
    tangents = np.gradient(points, axis=0)
    tangents[[0, -1]] = points[1] - points[-2]
    tangents /= np.linalg.norm(tangents, axis=1)[:, None]
    return curvegeom.SpaceCurve(points=points, tangents=tangents, closed=True)


def run_bench(n: int, threads: int) -> dict:
    """Time the Gauss kernel and check the deterministic-reduction contract."""
    import time

    if n < 64:
        raise ValueError(f"need n >= 64, got {n}")
    curve = _helical_closure(n)
    writhe.writhe_gauss(curve, threads=threads)  # warm up JIT
    t0 = time.perf_counter()
    value = writhe.writhe_gauss(curve, threads=threads)
    elapsed = time.perf_counter() - t0
    serial = writhe.writhe_gauss(curve, threads=1)
    if abs(value - serial) > 1e-12:
        raise RuntimeError(
            f"parallel/serial writhe mismatch: {value!r} vs {serial!r}"
        )
    pairs = n * (n - 1) / 2
    return {
        "n": n,
        "threads": threads,
        "writhe": value,
        "writhe_serial": serial,
        "seconds": elapsed,
        "pairs_per_second": pairs / elapsed if elapsed > 0 else float("inf"),
    }


def _cmd_bench(args) -> int:
    report = run_bench(args.n, args.threads)
    _write_text(args.out, _json_dumps(report))
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "measure": _cmd_measure,
    "close": _cmd_close,
    "evolve": _cmd_evolve,
    "homotopy": _cmd_homotopy,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (
        writhe.FullerHypothesisError,
        topology.ResolutionError,
        dynamics.BlowUpError,
    ) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, grid_field.BoundaryDecayError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
