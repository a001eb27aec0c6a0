"""Split-step Fourier propagator for the 1-D Schrodinger equation.

The kinetic term plays the drift role (diagonal in Fourier space) and the
potential multiplication plays the kick role; this orientation satisfies the
structural condition that makes the drift/kick schemes of this library
eighth-order here as well, and it is the only mapping accepted.

Conventions: numpy's forward/inverse DFT pair (exactly norm-preserving in
the discrete 2-norm); discrete norms and inner products carry the dx
quadrature weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .schemes import FlowKind, SchemeCoefficients
from .stepping import _as_schedule


@dataclass(frozen=True)
class SpatialGrid:
    x_min: float
    x_max: float
    n: int
    nodes: np.ndarray
    wavenumbers: np.ndarray
    dx: float


def uniform_grid(x_min: float, x_max: float, n: int) -> SpatialGrid:
    """Uniform periodic grid with a power-of-two node count."""
    if n <= 0 or n & (n - 1):
        raise ValueError(f"node count {n!r} is not a power of two")
    if x_max <= x_min:
        raise ValueError("empty interval")
    length = x_max - x_min
    dx = length / n
    nodes = x_min + dx * np.arange(n)
    wavenumbers = 2.0 * math.pi * np.fft.fftfreq(n, d=dx)
    return SpatialGrid(x_min, x_max, n, nodes, wavenumbers, dx)


@dataclass
class QuantumState:
    u: np.ndarray
    grid: SpatialGrid
    t: float = 0.0

    def copy(self) -> "QuantumState":
        return QuantumState(self.u.copy(), self.grid, self.t)


def discrete_norm(state: QuantumState) -> float:
    """sqrt(sum |u_n|^2 dx)."""
    return math.sqrt(float(np.sum(np.abs(state.u) ** 2)) * state.grid.dx)


def poschl_teller_potential(grid: SpatialGrid, well_depth: float = 10.0) -> np.ndarray:
    """V(x) = -(depth/2) sech^2(x), depth = lambda*(lambda+1)."""
    if well_depth <= 0.0:
        raise ValueError("well-depth product must be positive")
    return -(well_depth / 2.0) / np.cosh(grid.nodes) ** 2


def initial_gaussian(grid: SpatialGrid) -> QuantumState:
    """Gaussian exp(-x^2/2) normalized to unit discrete norm."""
    u = np.exp(-grid.nodes**2 / 2.0).astype(complex)
    u /= math.sqrt(float(np.sum(np.abs(u) ** 2)) * grid.dx)
    return QuantumState(u, grid, 0.0)


def kinetic_flow(state: QuantumState, theta: float) -> QuantumState:
    """Free evolution over phase time theta, diagonal in Fourier space."""
    if theta == 0.0:
        return state.copy()
    k = state.grid.wavenumbers
    u = np.fft.ifft(np.exp(-1j * theta * k**2 / 2.0) * np.fft.fft(state.u))
    return QuantumState(u, state.grid, state.t + theta)


def potential_flow(state: QuantumState, theta: float, potential: np.ndarray) -> QuantumState:
    """Pointwise phase rotation exp(-i*theta*V)."""
    if theta == 0.0:
        return state.copy()
    return QuantumState(np.exp(-1j * theta * potential) * state.u, state.grid, state.t)


def apply_hamiltonian(state: QuantumState, potential: np.ndarray) -> np.ndarray:
    """H u = (spectral kinetic part + V) u."""
    k = state.grid.wavenumbers
    return np.fft.ifft(k**2 / 2.0 * np.fft.fft(state.u)) + potential * state.u


def energy_expectation(state: QuantumState, potential: np.ndarray) -> float:
    """<u, H u> with the dx-weighted inner product (real part)."""
    hu = apply_hamiltonian(state, potential)
    return float(np.real(np.vdot(state.u, hu))) * state.grid.dx


def evolve(
    scheme: SchemeCoefficients,
    grid: SpatialGrid,
    potential: np.ndarray,
    state0: QuantumState,
    h: float,
    t_final: float,
    sample_stride: int = 1,
    potential_role: str = "kick",
) -> tuple[QuantumState, list[tuple[float, float, float]]]:
    """Propagate with a splitting scheme, recording (t, norm_err, energy_err).

    The drift entries act through the kinetic flow and the kick entries
    through the potential flow; asking for the reverse mapping is an error
    because it breaks the structural assumption behind the schemes.
    """
    if potential_role != "kick":
        raise ValueError(
            "the potential must play the kick role; the kinetic part is the drift"
        )
    schedule = _as_schedule(scheme)
    ratio = (t_final - state0.t) / h
    n_steps = round(ratio)
    if n_steps < 0 or abs(ratio - n_steps) > 1e-8:
        raise ValueError(f"(t_final - t0)/h = {ratio!r} is not an integer")
    k2_half = grid.wavenumbers**2 / 2.0
    norm0 = discrete_norm(state0)
    e0 = energy_expectation(state0, potential)
    u = state0.u.copy()
    t = state0.t
    records: list[tuple[float, float, float]] = []
    for n in range(n_steps):
        for kind, coeff in schedule.entries:
            theta = coeff * h
            if kind is FlowKind.DRIFT_A:
                u = np.fft.ifft(np.exp(-1j * theta * k2_half) * np.fft.fft(u))
            else:
                u = np.exp(-1j * theta * potential) * u
        t = state0.t + (n + 1) * h
        if (n + 1) % sample_stride == 0 or n == n_steps - 1:
            st = QuantumState(u, grid, t)
            norm_err = abs(discrete_norm(st) - norm0)
            energy_err = abs(energy_expectation(st, potential) - e0)
            records.append((t, norm_err, energy_err))
    return QuantumState(u, grid, t), records
