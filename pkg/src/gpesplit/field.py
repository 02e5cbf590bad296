"""Complex wave-function samples and elementary norms."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .grid import SpaceGrid


class Layout(str, Enum):
    DIRICHLET = "dirichlet"
    PERIODIC = "periodic"

    def size(self, grid: SpaceGrid) -> int:
        return grid.M - 1 if self is Layout.DIRICHLET else grid.M


@dataclass(frozen=True, eq=False)
class WaveField:
    """Samples of ``u`` in one index convention.

    Dirichlet fields hold ``u_1 .. u_{M-1}``; periodic fields hold
    ``u_0 .. u_{M-1}``.
    """

    values: np.ndarray
    layout: Layout

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.ndim != 1:
            raise ValueError("wave field values must be one-dimensional")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "layout", Layout(self.layout))

    def __len__(self) -> int:
        return len(self.values)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def with_values(self, values: np.ndarray) -> "WaveField":
        return WaveField(values, self.layout)

    def nodes(self) -> np.ndarray:
        """Values at all ``M + 1`` nodes ``x_0 .. x_M``."""
        if self.layout is Layout.DIRICHLET:
            return np.concatenate(([0j], self.values, [0j]))
        return np.concatenate((self.values, self.values[:1]))


def dirichlet(values) -> WaveField:
    return WaveField(values, Layout.DIRICHLET)


def periodic(values) -> WaveField:
    return WaveField(values, Layout.PERIODIC)


def zeros(grid: SpaceGrid, layout: Layout) -> WaveField:
    return WaveField(np.zeros(Layout(layout).size(grid), dtype=complex), layout)


def sample(func, grid: SpaceGrid, layout: Layout) -> WaveField:
    """Evaluate ``func(x)`` on the nodes of ``layout``."""
    layout = Layout(layout)
    x = grid.interior if layout is Layout.DIRICHLET else grid.periodic
    return WaveField(func(x), layout)


def as_layout(f: WaveField, layout: Layout) -> WaveField:
    """Convert between conventions.

    Going to Dirichlet drops ``u_0``; going to periodic sets ``u_0 = 0``.
    """
    layout = Layout(layout)
    if f.layout is layout:
        return f
    if layout is Layout.DIRICHLET:
        return WaveField(f.values[1:], layout)
    return WaveField(np.concatenate(([0j], f.values)), layout)


def abs_squared(f: WaveField | np.ndarray) -> np.ndarray:
    u = f.values if isinstance(f, WaveField) else np.asarray(f)
    return u.real ** 2 + u.imag ** 2


def discrete_l2_sq(f: WaveField | np.ndarray, dx: float) -> float:
    """``dx * sum |u_j|^2`` over the stored samples.

    For Dirichlet data this is the trapezoid rule with zero end values; for
    periodic data it is the trapezoid rule with ``u_M = u_0``.
    """
    return float(dx * np.sum(abs_squared(f)))


def discrete_l2(f: WaveField | np.ndarray, dx: float) -> float:
    return float(np.sqrt(discrete_l2_sq(f, dx)))
