"""Execution of splitting schemes on second-order systems.

Composition convention, fixed library-wide: the first entry of a
FlowSchedule acts first on the state.  Drifts advance positions (and the
time coordinate), kicks advance velocities through one force evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ForceSingularity, InconsistentScheme, NonIntegerStepCount
from .linear_flows import LinearDrift
from .schemes import (
    FlowKind,
    FlowSchedule,
    SchemeCoefficients,
    SchemeKind,
    _merge_adjacent,
    build_scheme,
    ss_gammas_full,
    unfold,
)

STEP_COUNT_TOL = 1e-8


@dataclass
class State:
    """Positions, velocities and time of a second-order system."""

    y: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def copy(self) -> "State":
        return State(self.y.copy(), self.v.copy(), self.t)


@dataclass
class SecondOrderSystem:
    """Problem interface: acceleration g(t, y) plus optional structure."""

    dimension: int
    force: Callable[[float, np.ndarray], np.ndarray]
    linear_part: LinearDrift | None = None
    energy: Callable[[State], float] | None = None
    name: str = ""


@dataclass
class StepStats:
    force_evaluations: int = 0
    steps_taken: int = 0
    fsal_merges: int = 0


@dataclass
class IntegrationResult:
    state: State
    stats: StepStats


def flow_drift(system: SecondOrderSystem, tau: float, state: State) -> State:
    """Exact drift flow over scaled time tau."""
    if system.linear_part is None:
        y = state.y + tau * state.v
        v = state.v.copy()
    else:
        y, v = system.linear_part.propagate(tau, state.y, state.v)
    return State(y, v, state.t + tau)


def flow_kick(
    system: SecondOrderSystem, tau: float, state: State, stats: StepStats
) -> State:
    """Exact kick flow: v += tau * g(t, y).  Skipped entirely when tau == 0."""
    if tau == 0.0:
        return state.copy()
    g = system.force(state.t, state.y)
    if not np.all(np.isfinite(g)):
        raise ForceSingularity(
            f"non-finite force at t={state.t!r} for system {system.name!r}"
        )
    stats.force_evaluations += 1
    return State(state.y.copy(), state.v + tau * g, state.t)


def _as_schedule(scheme) -> FlowSchedule:
    if isinstance(scheme, FlowSchedule):
        return scheme
    if isinstance(scheme, str):
        scheme = build_scheme(scheme)
    if scheme.kind is SchemeKind.SS_COMPOSITION:
        return ss_schedule(scheme)
    return unfold(scheme)


def step(
    schedule,
    system: SecondOrderSystem,
    h: float,
    state: State,
    stats: StepStats,
    fsal_carry: float | None = None,
    defer_last: bool = False,
):
    """Apply one step of a flow schedule.

    ``fsal_carry`` is the deferred trailing coefficient of the previous step
    (same flow kind as this schedule's first entry); it is merged into the
    first flow.  With ``defer_last`` the final flow is withheld and its
    coefficient returned as the new carry.
    Returns (state, carry).
    """
    schedule = _as_schedule(schedule)
    if h == 0.0:
        raise ValueError("step size must be nonzero")
    entries = schedule.entries
    last = len(entries) - 1
    y, v, t = state.y, state.v, state.t
    carry_out: float | None = None
    for idx, (kind, coeff) in enumerate(entries):
        if idx == 0 and fsal_carry is not None:
            coeff = coeff + fsal_carry
            stats.fsal_merges += 1
        if idx == last and defer_last:
            carry_out = coeff
            break
        tau = coeff * h
        if kind is FlowKind.KICK_B:
            if tau != 0.0:
                g = system.force(t, y)
                if not (math.isfinite(g[0]) and np.all(np.isfinite(g))):
                    raise ForceSingularity(
                        f"non-finite force at t={t!r} for system {system.name!r}"
                    )
                stats.force_evaluations += 1
                v = v + tau * g
        else:
            if system.linear_part is None:
                y = y + tau * v
            else:
                y, v = system.linear_part.propagate(tau, y, v)
            t = t + tau
    stats.steps_taken += 1
    return State(y, v, t), carry_out


def integrate(
    scheme,
    system: SecondOrderSystem,
    h: float,
    state0: State,
    t_final: float,
    observers: Sequence[Callable[[State, StepStats], None]] = (),
    fsal: bool = True,
) -> IntegrationResult:
    """Integrate from state0.t to t_final with constant step h.

    FSAL merging of the boundary flows is applied only when no observers are
    attached, since observers must see the exact per-step states.  The final
    step is never shrunk: (t_final - t0)/h must be an integer within
    tolerance, otherwise NonIntegerStepCount is raised.
    """
    schedule = _as_schedule(scheme)
    span = t_final - state0.t
    if span == 0.0:
        return IntegrationResult(state0.copy(), StepStats())
    if h == 0.0 or (span > 0) != (h > 0):
        raise NonIntegerStepCount(f"step size {h!r} does not advance toward {t_final!r}")
    ratio = span / h
    n_steps = round(ratio)
    if n_steps < 1 or abs(ratio - n_steps) > STEP_COUNT_TOL:
        raise NonIntegerStepCount(
            f"(t_final - t0)/h = {ratio!r} is not an integer within {STEP_COUNT_TOL}"
        )
    stats = StepStats()
    merge = fsal and schedule.fsal_mergeable and not observers and n_steps > 1
    state = state0.copy()
    carry: float | None = None
    for n in range(n_steps):
        defer = merge and n < n_steps - 1
        state, carry = step(
            schedule, system, h, state, stats, fsal_carry=carry, defer_last=defer
        )
        for obs in observers:
            obs(state, stats)
    return IntegrationResult(state, stats)


def strang_schedule(kind: str = "ABA") -> FlowSchedule:
    """Second-order symmetric kernel as a flow schedule."""
    return unfold(build_scheme(f"STRANG_{kind.upper()}"))


def ss_schedule(
    composition: SchemeCoefficients, kernel: str = "ABA"
) -> FlowSchedule:
    """Unfold an SS composition of second-order kernels into one schedule.

    Adjacent same-kind flows at kernel boundaries are merged, so an ABA-kernel
    composition with m kernel applications costs exactly m kicks per step.
    """
    gammas = ss_gammas_full(composition)
    base = strang_schedule(kernel)
    entries: list[tuple[FlowKind, float]] = []
    for g in gammas:
        entries.extend((kind, g * c) for kind, c in base.entries)
    merged = _merge_adjacent(entries)
    stages = sum(1 for kind, _ in merged if kind is FlowKind.KICK_B)
    return FlowSchedule(
        entries=tuple(merged),
        fsal_mergeable=merged[0][0] is merged[-1][0],
        stages=stages,
    )


def ss_step(
    composition: SchemeCoefficients,
    kernel: str,
    system: SecondOrderSystem,
    h: float,
    state: State,
    stats: StepStats,
) -> State:
    """One step of a palindromic composition of second-order kernels."""
    if composition.kind is not SchemeKind.SS_COMPOSITION:
        raise InconsistentScheme(f"{composition.name} is not an SS composition")
    out, _ = step(ss_schedule(composition, kernel), system, h, state, stats)
    return out


def reversed_schedule(schedule: FlowSchedule) -> FlowSchedule:
    return FlowSchedule(
        entries=tuple(reversed(schedule.entries)),
        fsal_mergeable=schedule.fsal_mergeable,
        stages=schedule.stages,
    )


def _phase_norm(a: State, b: State) -> float:
    dy = np.max(np.abs(a.y - b.y)) if a.y.size else 0.0
    dv = np.max(np.abs(a.v - b.v)) if a.v.size else 0.0
    return max(dy, dv)


def time_symmetry_defect(
    scheme, system: SecondOrderSystem, h: float, state: State
) -> float:
    """sup-norm of psi_{-h}(psi_h(x)) - x; pure round-off for palindromes."""
    if h == 0.0:
        return 0.0
    schedule = _as_schedule(scheme)
    stats = StepStats()
    forward, _ = step(schedule, system, h, state, stats)
    back, _ = step(schedule, system, -h, forward, stats)
    return _phase_norm(back, state)


def symplecticity_defect(
    scheme,
    system: SecondOrderSystem,
    h: float,
    state: State,
    eps: float | None = None,
) -> float:
    """Deviation of the one-step Jacobian from symplecticity.

    The Jacobian is estimated by central finite differences on every
    phase-space coordinate; returns the induced infinity-norm of
    M^T Omega M - Omega.
    """
    schedule = _as_schedule(scheme)
    d = system.dimension
    if eps is None:
        scale = max(
            1.0,
            float(np.max(np.abs(state.y))) if state.y.size else 1.0,
            float(np.max(np.abs(state.v))) if state.v.size else 1.0,
        )
        eps = 1e-6 * scale
    x0 = np.concatenate([state.y, state.v])

    def advance(x: np.ndarray) -> np.ndarray:
        st = State(x[:d].copy(), x[d:].copy(), state.t)
        out, _ = step(schedule, system, h, st, StepStats())
        return np.concatenate([out.y, out.v])

    jac = np.empty((2 * d, 2 * d))
    for i in range(2 * d):
        xp = x0.copy()
        xm = x0.copy()
        xp[i] += eps
        xm[i] -= eps
        jac[:, i] = (advance(xp) - advance(xm)) / (2.0 * eps)
    omega = np.block(
        [[np.zeros((d, d)), np.eye(d)], [-np.eye(d), np.zeros((d, d))]]
    )
    defect = jac.T @ omega @ jac - omega
    return float(np.linalg.norm(defect, np.inf))


class EnergyErrorObserver:
    """Records the relative energy error |H(x) - H(x0)| / |H(x0)| per step."""

    def __init__(self, system: SecondOrderSystem, state0: State):
        if system.energy is None:
            raise ValueError(f"system {system.name!r} has no energy function")
        self._system = system
        self.initial_energy = system.energy(state0)
        self._scale = abs(self.initial_energy) or 1.0
        self.records: list[tuple[float, float]] = []
        self.max_abs = 0.0

    def __call__(self, state: State, stats: StepStats) -> None:
        err = abs(self._system.energy(state) - self.initial_energy) / self._scale
        self.records.append((state.t, err))
        if err > self.max_abs:
            self.max_abs = err

    def half_maxima(self) -> tuple[float, float]:
        """Max error over the first and second half of the recorded span."""
        n = len(self.records)
        first = max((e for _, e in self.records[: n // 2]), default=0.0)
        second = max((e for _, e in self.records[n // 2 :]), default=0.0)
        return first, second
