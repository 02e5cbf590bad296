"""Closed-form solitons and initial data.

Two single-soliton formulas live here:

``exact_single_soliton``
    ``sech((x - t/10 - 25)/sqrt(2)) exp(i (x/20 - 199 t/400))``, the closed
    form given for the one-soliton benchmark.  It does *not* satisfy
    ``i u_t = -u_xx/2 - |u|^2 u``: amplitude and width, envelope speed and
    phase rate are all inconsistent with that equation (its PDE residual is of
    order one, see :func:`gpe_residual`).  It is kept verbatim because it
    defines the benchmark's initial condition.

``bright_soliton``
    The travelling bright soliton of ``i u_t = -u_xx/2 + g |u|^2 u`` for
    ``g < 0``, exact to rounding.  Convergence studies use this one.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import Layout, WaveField, sample
from .grid import SpaceGrid


def sech(z):
    return 1.0 / np.cosh(z)


def exact_single_soliton(x, t):
    return sech((x - t / 10.0 - 25.0) / np.sqrt(2.0)) * np.exp(1j * (x / 20.0 - 199.0 * t / 400.0))


@dataclass(frozen=True)
class SolitonParams:
    """Density speed ``v_d``, phase speed ``v_p``, amplitude ``A0``, centre ``x0``."""

    v_d: float
    v_p: float
    A0: float
    x0: float = 0.0

    def __post_init__(self):
        if not self.A0 > 0:
            raise ValueError("soliton amplitude must be positive")

    @classmethod
    def from_speeds(cls, v_d: float, v_p: float, g: float = -1.0, x0: float = 0.0):
        """``A0 = sqrt((v_d^2 - 2 v_p) / (2 |g|))``."""
        if g == 0:
            raise ValueError("a bright soliton needs g != 0")
        a2 = (v_d ** 2 - 2.0 * v_p) / (2.0 * abs(g))
        if not a2 > 0:
            raise ValueError("speeds give a non-positive squared amplitude")
        return cls(v_d, v_p, float(np.sqrt(a2)), x0)


BENCHMARK_SOLITON = SolitonParams.from_speeds(1 / 10, -199 / 200, -1.0, 25.0)


def bright_soliton(x, t, amplitude: float = 1.0, velocity: float = 1 / 20,
                   x0: float = 25.0, g: float = -1.0, phase: float = 0.0):
    """``A sech(A sqrt|g| (x - x0 - v t)) exp(i (v x - (v^2 - |g| A^2) t / 2 + phase))``."""
    if g >= 0:
        raise ValueError("bright solitons need attractive interaction (g < 0)")
    k = amplitude * np.sqrt(-g)
    omega = 0.5 * (velocity ** 2 + g * amplitude ** 2)
    return (amplitude * sech(k * (x - x0 - velocity * t))
            * np.exp(1j * (velocity * x - omega * t + phase)))


def initial_single_soliton(grid: SpaceGrid, layout: Layout = Layout.PERIODIC) -> WaveField:
    return sample(lambda x: exact_single_soliton(x, 0.0), grid, layout)


def initial_two_solitons(grid: SpaceGrid, layout: Layout = Layout.PERIODIC,
                         symmetric_width: bool = False) -> WaveField:
    """Pulses at ``x = 20`` (width sqrt 2) and ``x = -20`` (width 1, or sqrt 2
    with ``symmetric_width``)."""
    w2 = np.sqrt(2.0) if symmetric_width else 1.0

    def u0(x):
        return (sech((x - 20.0) / np.sqrt(2.0)) * np.exp(-1j * x / 20.0)
                + sech((x + 20.0) / w2) * np.exp(1j * x / 20.0))

    return sample(u0, grid, layout)


# sixth-order central stencils
_D1 = np.array([-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60])
_D2 = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])
_OFFSETS = np.arange(-3, 4)


def gpe_residual(u, x, t, g: float = -1.0, h: float = 1e-2):
    """``i u_t + u_xx/2 - g |u|^2 u`` by sixth-order central differences."""
    x = np.asarray(x, dtype=float)[..., None]
    t = np.asarray(t, dtype=float)[..., None]
    ut = (u(x, t + _OFFSETS * h) * _D1).sum(-1) / h
    uxx = (u(x + _OFFSETS * h, t) * _D2).sum(-1) / h ** 2
    u0 = u(x[..., 0], t[..., 0])
    return 1j * ut + 0.5 * uxx - g * np.abs(u0) ** 2 * u0
