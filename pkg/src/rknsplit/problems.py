"""Classical test systems with forces, energies and canonical initial data."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CollisionSingularity, EccentricityOutOfRange
from .linear_flows import LinearDrift
from .stepping import SecondOrderSystem, State

COLLISION_GUARD = 1e-30

ARENSTORF_MU = 0.012277471
ARENSTORF_PERIOD = 17.06521656015796255889
ARENSTORF_Y1 = 0.994
ARENSTORF_V2 = -1.00758510637908252240


@dataclass
class ProblemInstance:
    system: SecondOrderSystem
    initial: State
    invariant_refs: dict[str, float] = field(default_factory=dict)
    parameters: dict[str, float] = field(default_factory=dict)


def kepler(e: float = 0.5, mu: float = 1.0) -> ProblemInstance:
    """Planar two-body problem started at perihelion of an eccentricity-e ellipse."""
    if not 0.0 <= e < 1.0:
        raise EccentricityOutOfRange(f"eccentricity {e!r} outside [0, 1)")
    if mu <= 0.0:
        raise ValueError("gravitational parameter must be positive")

    def force(t: float, q: np.ndarray) -> np.ndarray:
        r2 = q[0] * q[0] + q[1] * q[1]
        if r2 < COLLISION_GUARD:
            raise CollisionSingularity("two-body collision (r -> 0)")
        return (-mu / (r2 * math.sqrt(r2))) * q

    def energy(state: State) -> float:
        r = math.hypot(state.y[0], state.y[1])
        return 0.5 * float(state.v @ state.v) - mu / r

    system = SecondOrderSystem(dimension=2, force=force, energy=energy, name="kepler")
    initial = State(
        y=np.array([1.0 - e, 0.0]),
        v=np.array([0.0, math.sqrt((1.0 + e) / (1.0 - e))]),
        t=0.0,
    )
    refs = {}
    if mu == 1.0:
        refs = {"energy": -0.5, "period": 2.0 * math.pi}
    return ProblemInstance(system, initial, refs, {"e": e, "mu": mu})


def kepler_exact_state(e: float, t: float, mu: float = 1.0) -> State:
    """Exact Kepler state for the perihelion initial data (mu = 1 orbit, a = 1).

    Solves Kepler's equation E - e*sin(E) = t by Newton iteration; serves as
    an analytic reference for convergence studies.
    """
    if mu != 1.0:
        raise ValueError("exact reference implemented for mu = 1 only")
    m_anom = math.remainder(t, 2.0 * math.pi)
    big_e = m_anom if e < 0.8 else math.pi
    for _ in range(60):
        f = big_e - e * math.sin(big_e) - m_anom
        step = f / (1.0 - e * math.cos(big_e))
        big_e -= step
        if abs(step) < 1e-16:
            break
    s, c = math.sin(big_e), math.cos(big_e)
    r = 1.0 - e * c
    ydot_scale = 1.0 / r
    return State(
        y=np.array([c - e, math.sqrt(1.0 - e * e) * s]),
        v=np.array([-s * ydot_scale, math.sqrt(1.0 - e * e) * c * ydot_scale]),
        t=t,
    )


def pendulum(alpha: float = 3.0) -> ProblemInstance:
    """Simple mathematical pendulum started at the bottom with momentum alpha."""

    def force(t: float, q: np.ndarray) -> np.ndarray:
        return np.array([-math.sin(q[0])])

    def energy(state: State) -> float:
        return 0.5 * float(state.v[0]) ** 2 - math.cos(state.y[0])

    system = SecondOrderSystem(dimension=1, force=force, energy=energy, name="pendulum")
    initial = State(y=np.array([0.0]), v=np.array([float(alpha)]), t=0.0)
    return ProblemInstance(
        system, initial, {"energy": 0.5 * alpha * alpha - 1.0}, {"alpha": alpha}
    )


def henon_heiles(alpha: float = 0.2) -> ProblemInstance:
    """Henon-Heiles oscillator with the (alpha/2, 0, 0, alpha/4) initial family."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"amplitude {alpha!r} outside the scan range [0, 1]")

    def force(t: float, q: np.ndarray) -> np.ndarray:
        q1, q2 = q[0], q[1]
        return np.array([-q1 - 2.0 * q1 * q2, -q2 - q1 * q1 + q2 * q2])

    def energy(state: State) -> float:
        q1, q2 = state.y
        kinetic = 0.5 * float(state.v @ state.v)
        potential = 0.5 * (q1 * q1 + q2 * q2) + q1 * q1 * q2 - q2**3 / 3.0
        return kinetic + potential

    system = SecondOrderSystem(
        dimension=2, force=force, energy=energy, name="henon_heiles"
    )
    initial = State(
        y=np.array([alpha / 2.0, 0.0]), v=np.array([0.0, alpha / 4.0]), t=0.0
    )
    energy0 = energy(initial)
    return ProblemInstance(system, initial, {"energy": energy0}, {"alpha": alpha})


def _gravity_pair(y: np.ndarray, c1: np.ndarray, c2: np.ndarray, mu: float):
    """Accelerations toward two point masses mu' at c1 and mu at c2."""
    mu_p = 1.0 - mu
    r1 = y - c1
    r2 = y - c2
    d1 = (r1[0] * r1[0] + r1[1] * r1[1]) ** 1.5
    d2 = (r2[0] * r2[0] + r2[1] * r2[1]) ** 1.5
    if d1 < COLLISION_GUARD or d2 < COLLISION_GUARD:
        raise CollisionSingularity("third body collided with a primary")
    return -mu_p * r1 / d1 - mu * r2 / d2


def three_body_rotating(mu: float = ARENSTORF_MU) -> ProblemInstance:
    """Planar restricted three-body problem with circularly moving primaries.

    The primaries orbit the origin with unit angular velocity; the force on
    the third body is pure time-dependent gravitation (no linear part), which
    fits the splitting with time carried as an extra drift coordinate.
    """
    if not 0.0 < mu < 1.0:
        raise ValueError(f"mass ratio {mu!r} outside (0, 1)")
    mu_p = 1.0 - mu

    def force(t: float, y: np.ndarray) -> np.ndarray:
        ct, st = math.cos(t), math.sin(t)
        c1 = np.array([-mu * ct, -mu * st])
        c2 = np.array([mu_p * ct, mu_p * st])
        return _gravity_pair(y, c1, c2, mu)

    system = SecondOrderSystem(
        dimension=2, force=force, name="three_body_rotating"
    )
    initial = State(
        y=np.array([ARENSTORF_Y1, 0.0]),
        v=np.array([0.0, ARENSTORF_V2]),
        t=0.0,
    )
    return ProblemInstance(
        system,
        initial,
        {"period": ARENSTORF_PERIOD},
        {"mu": mu},
    )


def three_body_fixed(mu: float = ARENSTORF_MU) -> ProblemInstance:
    """Restricted three-body problem with the primaries pinned on the axis.

    The Coriolis and centrifugal terms form the exactly integrable linear
    drift (alpha = [[0, 2], [-2, 0]], beta = I); the remaining force is the
    gravitational pull of the two pinned primaries.
    """
    if not 0.0 < mu < 1.0:
        raise ValueError(f"mass ratio {mu!r} outside (0, 1)")
    mu_p = 1.0 - mu
    c1 = np.array([-mu, 0.0])
    c2 = np.array([mu_p, 0.0])

    def force(t: float, y: np.ndarray) -> np.ndarray:
        return _gravity_pair(y, c1, c2, mu)

    def energy(state: State) -> float:
        # Jacobi-type integral: conserved because the frame forces do no work.
        y1, y2 = state.y
        r1 = math.hypot(y1 + mu, y2)
        r2 = math.hypot(y1 - mu_p, y2)
        return (
            0.5 * float(state.v @ state.v)
            - 0.5 * (y1 * y1 + y2 * y2)
            - mu_p / r1
            - mu / r2
        )

    drift = LinearDrift(alpha=[[0.0, 2.0], [-2.0, 0.0]], beta=np.eye(2))
    system = SecondOrderSystem(
        dimension=2,
        force=force,
        linear_part=drift,
        energy=energy,
        name="three_body_fixed",
    )
    # Same physical trajectory as three_body_rotating, expressed in the frame
    # co-rotating with the primaries (frames coincide at t = 0).
    initial_rot = three_body_rotating(mu).initial
    initial = to_corotating_frame(initial_rot)
    return ProblemInstance(
        system,
        initial,
        {"period": ARENSTORF_PERIOD},
        {"mu": mu},
    )


def to_corotating_frame(state: State) -> State:
    """Map a state of three_body_rotating into the co-rotating frame.

    The co-rotating frame turns with the primaries (unit angular velocity,
    counterclockwise); velocities lose the frame-rotation contribution.
    """
    t = state.t
    ct, st = math.cos(t), math.sin(t)
    rot = np.array([[ct, st], [-st, ct]])  # R(-t)
    y = rot @ state.y
    omega_cross = np.array([-state.y[1], state.y[0]])
    v = rot @ (state.v - omega_cross)
    return State(y, v, t)


def from_corotating_frame(state: State) -> State:
    """Inverse of to_corotating_frame."""
    t = state.t
    ct, st = math.cos(t), math.sin(t)
    rot = np.array([[ct, -st], [st, ct]])  # R(t)
    y = rot @ state.y
    v = rot @ state.v + np.array([-y[1], y[0]])
    return State(y, v, t)
