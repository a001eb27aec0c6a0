"""Harmonic-sequence extrapolation of the second-order symmetric kernel.

Eliminating the even error powers of the kernel with sub-step counts
1..k yields methods of order 2k for k = 2, 3, 4 at 3, 6 and 10 kicks per
step.  Steps are combined in increment form (relative to the incoming
state) to keep round-off accumulation small on long runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import NonIntegerStepCount, UnsupportedLevel
from .schemes import FlowSchedule, ss_composition
from .stepping import (
    IntegrationResult,
    SecondOrderSystem,
    State,
    StepStats,
    ss_schedule,
    step,
)

_WEIGHTS: dict[int, tuple[Fraction, ...]] = {
    2: (Fraction(-1, 3), Fraction(4, 3)),
    3: (Fraction(1, 24), Fraction(-16, 15), Fraction(81, 40)),
    4: (
        Fraction(-1, 360),
        Fraction(16, 45),
        Fraction(-729, 280),
        Fraction(1024, 315),
    ),
}


@dataclass(frozen=True)
class ExtrapolationTableau:
    level: int  # order 2*level
    fractions: tuple[Fraction, ...]

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(float(f) for f in self.fractions)


def tableau(k: int) -> ExtrapolationTableau:
    """Exact rational harmonic-sequence weights for level k in {2, 3, 4}."""
    try:
        fractions = _WEIGHTS[k]
    except KeyError:
        raise UnsupportedLevel(f"extrapolation level {k!r} not in {{2, 3, 4}}") from None
    return ExtrapolationTableau(level=k, fractions=fractions)


def _subchain_schedules(k: int, kernel: str) -> tuple[FlowSchedule, ...]:
    """Schedule of l kernel applications of size h/l, interior flows merged."""
    chains = []
    for ell in range(1, k + 1):
        comp = ss_composition((1.0 / ell,) * ell, name=f"chain{ell}")
        chains.append(ss_schedule(comp, kernel))
    return tuple(chains)


def extrapolated_step(
    k: int,
    system: SecondOrderSystem,
    h: float,
    state: State,
    stats: StepStats,
    kernel: str = "ABA",
) -> State:
    """One extrapolated step of order 2k.

    Each sub-chain result enters as an increment over the incoming state;
    the weighted increments are combined in fixed sub-chain order.
    """
    tab = tableau(k)
    weights = tab.weights
    dy = np.zeros_like(state.y)
    dv = np.zeros_like(state.v)
    for ell, (w, schedule) in enumerate(zip(weights, _subchain_schedules(k, kernel)), 1):
        out, _ = step(schedule, system, h, state, stats)
        dy = dy + w * (out.y - state.y)
        dv = dv + w * (out.v - state.v)
    stats.steps_taken -= k - 1  # the k sub-chains form one extrapolated step
    return State(state.y + dy, state.v + dv, state.t + h)


def integrate_extrapolated(
    k: int,
    system: SecondOrderSystem,
    h: float,
    state0: State,
    t_final: float,
    observers: Sequence[Callable[[State, StepStats], None]] = (),
    kernel: str = "ABA",
) -> IntegrationResult:
    """Repeated extrapolated steps from state0.t to t_final.

    There is no cross-step FSAL: the linear combination breaks flow
    adjacency, so the per-step kick count k(k+1)/2 is exact.
    """
    span = t_final - state0.t
    stats = StepStats()
    if span == 0.0:
        return IntegrationResult(state0.copy(), stats)
    if h == 0.0 or (span > 0) != (h > 0):
        raise NonIntegerStepCount(f"step size {h!r} does not advance toward {t_final!r}")
    ratio = span / h
    n_steps = round(ratio)
    if n_steps < 1 or abs(ratio - n_steps) > 1e-8:
        raise NonIntegerStepCount(
            f"(t_final - t0)/h = {ratio!r} is not an integer within 1e-08"
        )
    schedules = _subchain_schedules(k, kernel)
    weights = tableau(k).weights
    state = state0.copy()
    for _ in range(n_steps):
        dy = np.zeros_like(state.y)
        dv = np.zeros_like(state.v)
        for w, schedule in zip(weights, schedules):
            out, _ = step(schedule, system, h, state, stats)
            dy = dy + w * (out.y - state.y)
            dv = dv + w * (out.v - state.v)
        stats.steps_taken -= k - 1
        state = State(state.y + dy, state.v + dv, state.t + h)
        for obs in observers:
            obs(state, stats)
    return IntegrationResult(state, stats)


def stage_count(k: int) -> int:
    """Kicks per extrapolated step: 1 + 2 + ... + k."""
    tableau(k)  # validates k
    return k * (k + 1) // 2
