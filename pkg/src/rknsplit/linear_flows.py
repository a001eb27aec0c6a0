"""Exact flow of the extended linear drift (y, v) -> exp(tau*M)(y, v).

The drift of a second-order system with a constant linear part
``y'' = alpha*y' + beta*y + g(t, y)`` acts on phase space through the
block matrix ``M = [[0, I], [beta, alpha]]``.  Its exponential is computed
by scaling and squaring with a [13/13] diagonal Pade core and cached per
distinct scaled time, since a splitting scheme reuses the same handful of
drift coefficients every step.
"""

from __future__ import annotations

import numpy as np

# Pade [13/13] numerator coefficients (Higham's expm core).
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_THETA13 = 5.371920351148152


def expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a degree-13 Pade core."""
    a = np.asarray(a, dtype=float)
    norm = np.linalg.norm(a, 1) if a.size else 0.0
    squarings = 0
    if norm > _THETA13:
        squarings = int(np.ceil(np.log2(norm / _THETA13)))
        a = a / (2.0**squarings)
    n = a.shape[0]
    ident = np.eye(n)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a4 @ a2
    b = _PADE13
    u = a @ (
        a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
        + b[7] * a6
        + b[5] * a4
        + b[3] * a2
        + b[1] * ident
    )
    v = (
        a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
        + b[6] * a6
        + b[4] * a4
        + b[2] * a2
        + b[0] * ident
    )
    r = np.linalg.solve(v - u, v + u)
    for _ in range(squarings):
        r = r @ r
    return r


class LinearDrift:
    """Cached propagators exp(tau*M) for M = [[0, I], [beta, alpha]]."""

    def __init__(self, alpha, beta, cache: bool = True):
        self.alpha = np.atleast_2d(np.asarray(alpha, dtype=float))
        self.beta = np.atleast_2d(np.asarray(beta, dtype=float))
        d = self.alpha.shape[0]
        if self.alpha.shape != (d, d) or self.beta.shape != (d, d):
            raise ValueError("alpha and beta must be square matrices of equal size")
        self.dimension = d
        zero = np.zeros((d, d))
        self.matrix = np.block([[zero, np.eye(d)], [self.beta, self.alpha]])
        self._cache: dict[float, np.ndarray] | None = {} if cache else None

    def propagator(self, tau: float) -> np.ndarray:
        """exp(tau*M); cached on the exact floating-point value of tau."""
        if self._cache is not None:
            hit = self._cache.get(tau)
            if hit is not None:
                return hit
        p = expm(tau * self.matrix)
        if self._cache is not None:
            self._cache[tau] = p
        return p

    def propagate(self, tau: float, y: np.ndarray, v: np.ndarray):
        """Apply the exact linear flow over scaled time tau."""
        p = self.propagator(tau)
        d = self.dimension
        x = np.concatenate([y, v])
        out = p @ x
        return out[:d], out[d:]
