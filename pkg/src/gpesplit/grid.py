"""Uniform space and time meshes.

Two index conventions share one :class:`SpaceGrid`:

* Dirichlet: the ``M - 1`` interior unknowns ``x_1 .. x_{M-1}``, with
  ``u_0 = u_M = 0`` implied.
* periodic: the ``M`` points ``x_0 .. x_{M-1}``; ``x_M`` is identified with ``x_0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpaceGrid:
    L: float
    M: int

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.M

    @property
    def points(self) -> np.ndarray:
        """All nodes ``x_0 = -L, ..., x_M = L``."""
        x = -self.L + self.dx * np.arange(self.M + 1)
        x[-1] = self.L
        return x

    @property
    def interior(self) -> np.ndarray:
        return self.points[1:-1]

    @property
    def periodic(self) -> np.ndarray:
        return self.points[:-1]

    def refine(self, factor: int) -> "SpaceGrid":
        return build_grid(self.L, self.M * factor)


@dataclass(frozen=True)
class TimeMesh:
    T: float
    N: int

    @property
    def dt(self) -> float:
        return self.T / self.N

    @property
    def times(self) -> np.ndarray:
        t = self.dt * np.arange(self.N + 1)
        t[-1] = self.T
        return t

    def refine(self, factor: int) -> "TimeMesh":
        return build_time_mesh(self.T, self.N * factor)


def build_grid(L: float, M: int) -> SpaceGrid:
    if not L > 0:
        raise ValueError(f"half-width L must be positive, got {L}")
    if int(M) != M or M < 4 or M % 2:
        raise ValueError(f"interval count M must be an even integer >= 4, got {M}")
    return SpaceGrid(float(L), int(M))


def build_time_mesh(T: float, N: int) -> TimeMesh:
    if not T > 0:
        raise ValueError(f"final time T must be positive, got {T}")
    if int(N) != N or N < 1:
        raise ValueError(f"step count N must be a positive integer, got {N}")
    return TimeMesh(float(T), int(N))
