"""Command-line benchmark harness."""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from . import bench, problems, schrodinger
from .bench import BenchmarkRecord, commensurate_h, estimate_order, write_csv
from .errors import RknSplitError
from .schemes import (
    EIGHTH_ORDER_NAMES,
    SCHEME_NAMES,
    build_scheme,
    coefficient_norms,
    delta_argmax,
    unfold,
)
from .stepping import EnergyErrorObserver, integrate


def _parse_grid(spec: str, log: bool = True) -> list[float]:
    """Parse 'lo:hi:n' into a grid (log-spaced by default), or a single value."""
    parts = spec.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected VALUE or lo:hi:n, got {spec!r}")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1:
        raise argparse.ArgumentTypeError("grid needs at least one point")
    if n == 1:
        return [lo]
    if log:
        if lo <= 0 or hi <= 0:
            raise argparse.ArgumentTypeError("log grid requires positive endpoints")
        return [float(x) for x in np.geomspace(lo, hi, n)]
    return [float(x) for x in np.linspace(lo, hi, n)]


def _parse_lin_grid(spec: str) -> list[float]:
    return _parse_grid(spec, log=False)


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline="", encoding="utf-8"), True


def _scheme_list(arg: str) -> list[str]:
    return [s.strip().upper() for s in arg.split(",") if s.strip()]


def _external(args) -> dict:
    if getattr(args, "external_coeffs", None):
        return bench.load_external_schemes(args.external_coeffs)
    return {}


def _emit(records, out):
    fh, close = _open_out(out)
    try:
        write_csv(records, fh)
    finally:
        if close:
            fh.close()


def cmd_schemes(args) -> int:
    external = _external(args)
    if args.action == "list":
        print(f"{'name':10s} {'kind':5s} {'stages':>6s} {'order':>5s} "
              f"{'delta_1':>8s} {'delta_max':>9s}")
        for name in SCHEME_NAMES:
            s = build_scheme(name)
            d1, dmax = coefficient_norms(s)
            print(f"{s.name:10s} {s.kind.value:5s} {s.stages:6d} {s.order:5d} "
                  f"{d1:8.3f} {dmax:9.4f}")
        for s in external.values():
            print(f"{s.name:10s} {s.kind.value:5s} {s.stages:6d} {s.order:5d}  (external)")
        return 0
    # check NAME
    s = bench._resolve_scheme(args.name, external)
    schedule = unfold(s)
    a_sum = math.fsum(c for k, c in schedule.entries if k.value == "A")
    b_sum = math.fsum(c for k, c in schedule.entries if k.value == "B")
    palindromic = list(schedule.entries) == list(reversed(schedule.entries))
    d1, dmax = coefficient_norms(s)
    print(f"scheme      : {s.name} ({s.kind.value}, {s.stages} stages, order {s.order})")
    print(f"entries     : {len(schedule.entries)} (kicks: {schedule.stages})")
    print(f"drift sum   : {a_sum!r}")
    print(f"kick sum    : {b_sum!r}")
    print(f"palindromic : {palindromic}")
    print(f"delta_1     : {d1:.6f}")
    print(f"delta_max   : {dmax:.6f} ({delta_argmax(s)})")
    ok = palindromic and abs(a_sum - 1) < 1e-13 and abs(b_sum - 1) < 1e-13
    return 0 if ok else 1


def cmd_sweep(args) -> int:
    parameter = {"kepler": args.e, "pendulum": args.alpha,
                 "henon_heiles": args.alpha,
                 "three_body_rotating": args.mu,
                 "three_body_fixed": args.mu}.get(args.problem)
    if parameter is not None:
        parameter = _parse_grid(parameter, log=False)[0] if isinstance(parameter, str) else parameter
    records = bench.run_sweep(
        args.problem,
        _scheme_list(args.schemes),
        _parse_grid(args.costs),
        args.tf,
        parameter=parameter,
        external=_external(args),
        workers=args.workers,
    )
    _emit(records, args.out)
    return 0


def cmd_scan(args) -> int:
    grids = {"kepler": args.e, "pendulum": args.alpha, "henon_heiles": args.alpha}
    spec = grids.get(args.problem)
    if spec is None:
        print(f"scan supports kepler, pendulum and henon_heiles", file=sys.stderr)
        return 2
    values = _parse_lin_grid(spec)
    records = bench.parameter_scan(
        args.problem,
        _scheme_list(args.schemes),
        values,
        args.cost,
        args.tf,
        external=_external(args),
        workers=args.workers,
    )
    _emit(records, args.out)
    return 0


def cmd_convergence(args) -> int:
    external = _external(args)
    scheme = bench._resolve_scheme(args.scheme, external)
    problem = bench.PROBLEM_FACTORIES[args.problem](
        bench.DEFAULT_PARAMETER[args.problem] if args.parameter is None else args.parameter
    )
    t_final = args.tf
    points = []
    n = args.steps
    for _ in range(args.levels):
        h = t_final / n
        result = integrate(scheme, problem.system, h, problem.initial, t_final)
        if args.problem == "kepler":
            ref = problems.kepler_exact_state(problem.parameters["e"], t_final)
        else:
            fine = integrate(scheme, problem.system, h / 2.0, problem.initial, t_final)
            ref = fine.state
        err = max(
            float(np.max(np.abs(result.state.y - ref.y))),
            float(np.max(np.abs(result.state.v - ref.v))),
        )
        points.append((h, err))
        print(f"h={h:.6e}  error={err:.6e}")
        n *= 2
    usable = [(h, e) for h, e in points if args.floor <= e <= args.ceiling]
    try:
        slope = estimate_order(usable if len(usable) >= 2 else points)
        print(f"estimated order: {slope:.3f}")
    except RknSplitError as exc:
        print(f"order estimate failed: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_arenstorf(args) -> int:
    steps = [int(round(x)) for x in _parse_grid(args.steps)]
    records = bench.arenstorf_run(args.scheme, steps, mu=args.mu, external=_external(args))
    _emit(records, args.out)
    return 0


def cmd_schrodinger(args) -> int:
    grid = schrodinger.uniform_grid(args.x_min, args.x_max, args.nodes)
    potential = schrodinger.poschl_teller_potential(grid, args.depth)
    state0 = schrodinger.initial_gaussian(grid)
    external = _external(args)
    records: list[BenchmarkRecord] = []
    for name in _scheme_list(args.schemes):
        scheme = bench._resolve_scheme(name, external)
        for cost in sorted(_parse_grid(args.costs)):
            h = commensurate_h(args.tf, cost, scheme.stages)
            _, samples = schrodinger.evolve(
                scheme, grid, potential, state0, h, args.tf,
                sample_stride=max(1, round(args.tf / h) // 200),
            )
            records.append(BenchmarkRecord(
                scheme=scheme.name,
                problem="schrodinger_poschl_teller",
                parameter=args.depth,
                h=h,
                stages=scheme.stages,
                cost=scheme.stages / h,
                force_evals=round(args.tf / h) * scheme.stages,
                max_energy_err=max(e for _, _, e in samples),
            ))
    _emit(records, args.out)
    if args.samples:
        scheme = bench._resolve_scheme(_scheme_list(args.schemes)[0], external)
        h = commensurate_h(args.tf, sorted(_parse_grid(args.costs))[0], scheme.stages)
        _, samples = schrodinger.evolve(scheme, grid, potential, state0, h, args.tf)
        with open(args.samples, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["t", "norm_err", "energy_err"])
            for row in samples:
                writer.writerow([repr(x) for x in row])
    return 0


def cmd_integrate(args) -> int:
    external = _external(args)
    scheme = bench._resolve_scheme(args.scheme, external)
    parameter = bench.DEFAULT_PARAMETER[args.problem] if args.parameter is None else args.parameter
    problem = bench.PROBLEM_FACTORIES[args.problem](parameter)
    h = args.h if args.h else commensurate_h(args.tf, args.cost, scheme.stages)
    rows = []
    energy = None
    if problem.system.energy is not None:
        energy = EnergyErrorObserver(problem.system, problem.initial)

    stride = max(1, args.stride)
    counter = {"n": 0}

    def recorder(state, stats):
        counter["n"] += 1
        if energy is not None:
            energy(state, stats)
        if counter["n"] % stride == 0:
            err = energy.records[-1][1] if energy is not None else ""
            rows.append([state.t, *state.y, *state.v, err])

    integrate(scheme, problem.system, h, problem.initial, args.tf, observers=[recorder])
    fh, close = _open_out(args.out)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        d = problem.system.dimension
        writer.writerow(
            ["t"] + [f"y{i+1}" for i in range(d)] + [f"v{i+1}" for i in range(d)]
            + ["energy_err"]
        )
        for row in rows:
            writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
    finally:
        if close:
            fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rknsplit",
        description="Benchmark harness for eighth-order drift/kick splitting schemes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, schemes=True):
        if schemes:
            p.add_argument("--schemes", default=",".join(EIGHTH_ORDER_NAMES),
                           help="comma-separated scheme names")
        p.add_argument("--tf", type=float, default=1000.0, help="final time")
        p.add_argument("--out", default=None, help="output CSV path (default stdout)")
        p.add_argument("--external-coeffs", action="append", default=[],
                       help="external coefficient file (repeatable)")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("schemes", help="list or check registered schemes")
    p.add_argument("action", choices=["list", "check"])
    p.add_argument("name", nargs="?", help="scheme name (for check)")
    p.add_argument("--external-coeffs", action="append", default=[])
    p.set_defaults(func=cmd_schemes)

    p = sub.add_parser("sweep", help="efficiency sweep over a cost grid")
    p.add_argument("--problem", default="kepler", choices=sorted(bench.PROBLEM_FACTORIES))
    p.add_argument("--costs", default="40:400:8", help="lo:hi:n (log-spaced) or value")
    p.add_argument("--e", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--mu", type=float, default=problems.ARENSTORF_MU)
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("scan", help="parameter scan at fixed cost")
    p.add_argument("--problem", default="kepler",
                   choices=["kepler", "pendulum", "henon_heiles"])
    p.add_argument("--cost", type=float, default=340.0, help="fixed cost s/h")
    p.add_argument("--e", default="0:0.8:9", help="eccentricity grid lo:hi:n")
    p.add_argument("--alpha", default="0:5:11", help="amplitude grid lo:hi:n")
    common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("convergence", help="order estimate by step halving")
    p.add_argument("--problem", default="kepler", choices=sorted(bench.PROBLEM_FACTORIES))
    p.add_argument("--scheme", default="A19")
    p.add_argument("--parameter", type=float, default=None)
    p.add_argument("--steps", type=int, default=40, help="coarsest steps count")
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--floor", type=float, default=1e-12)
    p.add_argument("--ceiling", type=float, default=1e-6)
    common(p, schemes=False)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("arenstorf", help="one-period return error of the closed orbit")
    p.add_argument("--scheme", default="A19")
    p.add_argument("--steps", default="4000:64000:5", help="steps-per-period grid")
    p.add_argument("--mu", type=float, default=problems.ARENSTORF_MU)
    common(p, schemes=False)
    p.set_defaults(func=cmd_arenstorf)

    p = sub.add_parser("schrodinger", help="split-step Fourier benchmark")
    p.add_argument("--costs", default="10:60:5")
    p.add_argument("--x-min", type=float, default=-8.0)
    p.add_argument("--x-max", type=float, default=8.0)
    p.add_argument("--nodes", type=int, default=256)
    p.add_argument("--depth", type=float, default=10.0, help="lambda*(lambda+1)")
    p.add_argument("--samples", default=None, help="per-sample CSV for the first run")
    common(p)
    p.set_defaults(func=cmd_schrodinger)

    p = sub.add_parser("integrate", help="dump a trajectory CSV")
    p.add_argument("--problem", default="kepler", choices=sorted(bench.PROBLEM_FACTORIES))
    p.add_argument("--scheme", default="A19")
    p.add_argument("--parameter", type=float, default=None)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--cost", type=float, default=340.0)
    p.add_argument("--stride", type=int, default=1, help="sampling stride in steps")
    common(p, schemes=False)
    p.set_defaults(func=cmd_integrate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RknSplitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
