"""Harmonic-sequence extrapolation: weights, stage counts, convergence."""

import math
from fractions import Fraction

import numpy as np
import pytest

from rknsplit import (
    SecondOrderSystem,
    State,
    StepStats,
    UnsupportedLevel,
    extrapolated_step,
    integrate_extrapolated,
    tableau,
)
from rknsplit.extrapolation import stage_count
from rknsplit.problems import kepler, kepler_exact_state


def oscillator():
    return SecondOrderSystem(dimension=1, force=lambda t, y: -y, name="oscillator")


def test_weights_k2():
    assert tableau(2).fractions == (Fraction(-1, 3), Fraction(4, 3))


def test_weights_k3():
    assert tableau(3).fractions == (
        Fraction(1, 24),
        Fraction(-16, 15),
        Fraction(81, 40),
    )


def test_weights_k4():
    assert tableau(4).fractions == (
        Fraction(-1, 360),
        Fraction(16, 45),
        Fraction(-729, 280),
        Fraction(1024, 315),
    )


@pytest.mark.parametrize("k", (2, 3, 4))
def test_weights_sum_to_one_exactly(k):
    assert sum(tableau(k).fractions) == Fraction(1)


@pytest.mark.parametrize("k", (0, 1, 5, -3))
def test_unsupported_level(k):
    with pytest.raises(UnsupportedLevel):
        tableau(k)


@pytest.mark.parametrize("k,stages", ((2, 3), (3, 6), (4, 10)))
def test_stage_count(k, stages):
    assert stage_count(k) == stages


@pytest.mark.parametrize("k,stages", ((2, 3), (3, 6), (4, 10)))
def test_force_evaluations_per_step(k, stages):
    prob = kepler(0.5)
    stats = StepStats()
    extrapolated_step(k, prob.system, 0.05, prob.initial, stats)
    assert stats.force_evaluations == stages
    assert stats.steps_taken == 1


def test_free_particle_exact_drift():
    free = SecondOrderSystem(dimension=1, force=lambda t, y: np.zeros(1), name="free")
    out = extrapolated_step(
        3, free, 0.7, State(np.array([2.0]), np.array([-1.0]), 0.0), StepStats()
    )
    assert out.v[0] == pytest.approx(-1.0, rel=1e-15)
    assert out.y[0] == pytest.approx(2.0 - 0.7, rel=1e-14)


def test_harmonic_k4_global_order_at_least_eight():
    # the linear problem shows mild superconvergence (slope ~9), so the
    # assertion is one-sided: at least eighth order
    sys = oscillator()
    t_final = 2.0 * math.pi
    errs = []
    for n in (16, 32):
        res = integrate_extrapolated(
            4, sys, t_final / n, State(np.array([1.0]), np.array([0.0]), 0.0), t_final
        )
        errs.append(abs(res.state.y[0] - 1.0))
    assert math.log2(errs[0] / errs[1]) >= 7.5


def test_increment_vs_direct_combination():
    """Increment form agrees with the direct weighted sum on a moderate run."""
    from rknsplit.extrapolation import _subchain_schedules, tableau as tab
    from rknsplit.stepping import step

    prob = kepler(0.5)
    h = 0.1
    weights = tab(3).weights
    schedules = _subchain_schedules(3, "ABA")
    state = prob.initial.copy()
    direct = prob.initial.copy()
    for _ in range(50):
        state = extrapolated_step(3, prob.system, h, state, StepStats())
        y = np.zeros_like(direct.y)
        v = np.zeros_like(direct.v)
        for w, schedule in zip(weights, schedules):
            out, _ = step(schedule, prob.system, h, direct, StepStats())
            y = y + w * out.y
            v = v + w * out.v
        direct = State(y, v, direct.t + h)
    scale = max(1.0, float(np.max(np.abs(direct.y))))
    assert np.max(np.abs(state.y - direct.y)) / scale <= 1e-10
    assert np.max(np.abs(state.v - direct.v)) / scale <= 1e-10


def test_integrate_extrapolated_kepler():
    prob = kepler(0.5)
    t_final = 2.0 * math.pi
    res = integrate_extrapolated(3, prob.system, t_final / 200, prob.initial, t_final)
    ref = kepler_exact_state(0.5, t_final)
    assert np.max(np.abs(res.state.y - ref.y)) <= 1e-8
    assert res.stats.force_evaluations == 200 * 6


def test_integrate_extrapolated_zero_span():
    prob = kepler(0.5)
    res = integrate_extrapolated(2, prob.system, 0.1, prob.initial, 0.0)
    assert res.stats.steps_taken == 0
    assert np.array_equal(res.state.y, prob.initial.y)
