"""Benchmark harness: efficiency sweeps, parameter scans, order estimation.

Costs are measured as stages per unit time (s/h), proportional to the number
of force evaluations.  Step sizes are always commensurate with the final
time: h = t_final / round(t_final * cost / stages), and the realized cost is
reported, never the requested one.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import problems as problems_mod
from .errors import DegenerateFit, InsufficientData, RknSplitError
from .problems import (
    ARENSTORF_PERIOD,
    ProblemInstance,
    kepler_exact_state,
    to_corotating_frame,
)
from .schemes import SchemeCoefficients, build_scheme, load_external
from .stepping import EnergyErrorObserver, State, integrate

CSV_COLUMNS = (
    "scheme",
    "problem",
    "parameter",
    "h",
    "stages",
    "cost",
    "force_evals",
    "max_energy_err",
    "final_pos_err",
    "status",
    "wall_time_s",
)

PROBLEM_FACTORIES: dict[str, Callable[[float], ProblemInstance]] = {
    "kepler": lambda p: problems_mod.kepler(e=p),
    "pendulum": lambda p: problems_mod.pendulum(alpha=p),
    "henon_heiles": lambda p: problems_mod.henon_heiles(alpha=p),
    "three_body_rotating": lambda p: problems_mod.three_body_rotating(mu=p),
    "three_body_fixed": lambda p: problems_mod.three_body_fixed(mu=p),
}

DEFAULT_PARAMETER = {
    "kepler": 0.5,
    "pendulum": 3.0,
    "henon_heiles": 0.2,
    "three_body_rotating": problems_mod.ARENSTORF_MU,
    "three_body_fixed": problems_mod.ARENSTORF_MU,
}


@dataclass
class BenchmarkRecord:
    scheme: str
    problem: str
    parameter: float
    h: float
    stages: int
    cost: float
    force_evals: int
    max_energy_err: float | None
    final_pos_err: float | None = None
    status: str = "ok"
    wall_time_s: float = 0.0

    def row(self) -> list[str]:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, float):
                return repr(float(x))
            return str(x)

        return [fmt(getattr(self, c)) for c in CSV_COLUMNS]


def commensurate_h(t_final: float, cost: float, stages: int) -> float:
    """Largest step of the form t_final/N whose cost is closest to `cost`."""
    if cost <= 0.0 or t_final <= 0.0:
        raise ValueError("cost and t_final must be positive")
    n = max(1, round(t_final * cost / stages))
    return t_final / n


def _resolve_scheme(name_or_scheme, external: dict[str, SchemeCoefficients] | None):
    if isinstance(name_or_scheme, SchemeCoefficients):
        return name_or_scheme
    key = str(name_or_scheme).upper()
    if external and key in external:
        return external[key]
    return build_scheme(key)


def _run_cell(
    problem_name: str,
    parameter: float,
    scheme: SchemeCoefficients,
    cost: float,
    t_final: float,
) -> BenchmarkRecord:
    problem = PROBLEM_FACTORIES[problem_name](parameter)
    h = commensurate_h(t_final, cost, scheme.stages)
    record = BenchmarkRecord(
        scheme=scheme.name,
        problem=problem_name,
        parameter=parameter,
        h=h,
        stages=scheme.stages,
        cost=scheme.stages / h,
        force_evals=0,
        max_energy_err=None,
    )
    observers = []
    if problem.system.energy is not None:
        observers.append(EnergyErrorObserver(problem.system, problem.initial))
    start = time.perf_counter()
    try:
        result = integrate(
            scheme, problem.system, h, problem.initial, t_final, observers=observers
        )
    except RknSplitError as exc:
        record.status = f"failed:{type(exc).__name__}"
        record.wall_time_s = time.perf_counter() - start
        return record
    record.wall_time_s = time.perf_counter() - start
    record.force_evals = result.stats.force_evaluations
    if observers:
        record.max_energy_err = observers[0].max_abs
    if problem_name == "kepler":
        ref = kepler_exact_state(parameter, t_final)
        record.final_pos_err = float(np.max(np.abs(result.state.y - ref.y)))
    return record


def _run_cells(cells, workers: int) -> list[BenchmarkRecord]:
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_cell_star, cells))
    return [_run_cell(*cell) for cell in cells]


def _run_cell_star(cell):
    return _run_cell(*cell)


def run_sweep(
    problem_name: str,
    scheme_names: Sequence,
    costs: Sequence[float],
    t_final: float,
    parameter: float | None = None,
    external: dict[str, SchemeCoefficients] | None = None,
    workers: int = 1,
) -> list[BenchmarkRecord]:
    """One record per (scheme, cost), in deterministic (scheme, cost) order."""
    if parameter is None:
        parameter = DEFAULT_PARAMETER[problem_name]
    schemes = [_resolve_scheme(n, external) for n in scheme_names]
    cells = [
        (problem_name, parameter, scheme, cost, t_final)
        for scheme in schemes
        for cost in sorted(costs)
    ]
    return _run_cells(cells, workers)


def parameter_scan(
    problem_name: str,
    scheme_names: Sequence,
    parameter_values: Sequence[float],
    fixed_cost: float,
    t_final: float,
    external: dict[str, SchemeCoefficients] | None = None,
    workers: int = 1,
) -> list[BenchmarkRecord]:
    """Max energy error across a parameter grid at a fixed cost s/h."""
    if fixed_cost <= 0.0:
        raise ValueError("fixed cost must be positive")
    schemes = [_resolve_scheme(n, external) for n in scheme_names]
    cells = [
        (problem_name, p, scheme, fixed_cost, t_final)
        for scheme in schemes
        for p in parameter_values
    ]
    return _run_cells(cells, workers)


def estimate_order(errors: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of log(error) against log(h)."""
    if len(errors) < 2:
        raise InsufficientData(f"need at least 2 (h, error) points, got {len(errors)}")
    hs = np.array([h for h, _ in errors], dtype=float)
    es = np.array([e for _, e in errors], dtype=float)
    if np.any(es <= 0.0) or np.any(hs <= 0.0):
        raise DegenerateFit("errors at or below the round-off floor")
    if np.allclose(np.log(hs), np.log(hs)[0]):
        raise DegenerateFit("all step sizes identical")
    slope = np.polyfit(np.log(hs), np.log(es), 1)[0]
    return float(slope)


def arenstorf_return_error(state: State, initial: State) -> float:
    """Co-rotating-frame sup-norm distance from the initial conditions.

    Both states are mapped into the frame co-rotating with the primaries;
    the final time is snapped to the exact period so only integration error
    enters the frame transformation.
    """
    final = to_corotating_frame(State(state.y, state.v, ARENSTORF_PERIOD))
    start = to_corotating_frame(State(initial.y, initial.v, 0.0))
    return max(
        float(np.max(np.abs(final.y - start.y))),
        float(np.max(np.abs(final.v - start.v))),
    )


def arenstorf_run(
    scheme,
    steps_per_period: Sequence[int],
    mu: float = problems_mod.ARENSTORF_MU,
    external: dict[str, SchemeCoefficients] | None = None,
) -> list[BenchmarkRecord]:
    """Period-return error over one Arenstorf period per step-count grid point."""
    scheme = _resolve_scheme(scheme, external)
    problem = problems_mod.three_body_rotating(mu)
    records = []
    for n in sorted(steps_per_period):
        h = ARENSTORF_PERIOD / n
        record = BenchmarkRecord(
            scheme=scheme.name,
            problem="arenstorf",
            parameter=mu,
            h=h,
            stages=scheme.stages,
            cost=scheme.stages / h,
            force_evals=0,
            max_energy_err=None,
        )
        start = time.perf_counter()
        try:
            result = integrate(
                scheme, problem.system, h, problem.initial, ARENSTORF_PERIOD
            )
        except RknSplitError as exc:
            record.status = f"failed:{type(exc).__name__}"
            record.wall_time_s = time.perf_counter() - start
            records.append(record)
            continue
        record.wall_time_s = time.perf_counter() - start
        record.force_evals = result.stats.force_evaluations
        record.final_pos_err = arenstorf_return_error(result.state, problem.initial)
        records.append(record)
    return records


def load_external_schemes(paths: Iterable) -> dict[str, SchemeCoefficients]:
    out = {}
    for path in paths:
        scheme = load_external(path)
        out[scheme.name.upper()] = scheme
    return out


def write_csv(records: Sequence[BenchmarkRecord], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        writer.writerow(record.row())
