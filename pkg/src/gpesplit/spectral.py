"""Fourier substeps on the periodic ``M``-point grid.

Modes are indexed symmetrically, ``l = -M/2 .. M/2 - 1``, with wavenumbers
``mu_l = pi l / L`` and

    u_hat_l = sum_j u_j exp(-i mu_l (x_j - L)).

Since ``mu_l (x_j - L) = 2 pi l j / M - 2 pi l`` this is the ordinary length-M
DFT, so numpy's FFT does the work and only the mode ordering differs.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .field import Layout, WaveField, abs_squared
from .grid import SpaceGrid


def mode_numbers(M: int) -> np.ndarray:
    return np.arange(-M // 2, M // 2)


def to_symmetric_order(v: np.ndarray) -> np.ndarray:
    """FFT order ``0, 1, .., M/2-1, -M/2, .., -1`` -> ``-M/2 .. M/2-1``."""
    return np.fft.fftshift(v)


def to_fft_order(v: np.ndarray) -> np.ndarray:
    return np.fft.ifftshift(v)


def wavenumbers(grid: SpaceGrid) -> np.ndarray:
    """``mu_l`` in symmetric order."""
    return np.pi * mode_numbers(grid.M) / grid.L


@dataclass(frozen=True, eq=False)
class SpectralField:
    coeffs: np.ndarray  # symmetric order

    @property
    def modes(self) -> np.ndarray:
        return mode_numbers(len(self.coeffs))


def _require_periodic(f: WaveField, grid: SpaceGrid):
    if f.layout is not Layout.PERIODIC or len(f) != grid.M:
        raise ValueError("spectral substeps need a periodic field with M samples")


def dft_forward(f: WaveField, grid: SpaceGrid) -> SpectralField:
    _require_periodic(f, grid)
    return SpectralField(to_symmetric_order(np.fft.fft(f.values)))


def dft_inverse(s: SpectralField, grid: SpaceGrid) -> WaveField:
    if len(s.coeffs) != grid.M:
        raise ValueError("coefficient count does not match grid")
    return WaveField(np.fft.ifft(to_fft_order(s.coeffs)), Layout.PERIODIC)


@lru_cache(maxsize=64)
def _free_multiplier(L: float, M: int, dt: float) -> np.ndarray:
    mu = np.pi * np.fft.fftfreq(M, 1.0 / M) / L
    m = np.exp(-0.5j * mu ** 2 * dt)
    m.flags.writeable = False
    return m


def free_multiplier(grid: SpaceGrid, dt: float) -> np.ndarray:
    """``exp(-i mu_l^2 dt / 2)`` in FFT order (cached, read-only)."""
    return _free_multiplier(grid.L, grid.M, float(dt))


def propagate_values(u: np.ndarray, dt: float, grid: SpaceGrid) -> np.ndarray:
    return np.fft.ifft(free_multiplier(grid, dt) * np.fft.fft(u))


def linear_propagate(f: WaveField, dt: float, grid: SpaceGrid) -> WaveField:
    """Exact flow of ``i u_t = -u_xx / 2`` over ``dt``."""
    _require_periodic(f, grid)
    return f.with_values(propagate_values(f.values, dt, grid))


def phase_values(u: np.ndarray, g: float, dt: float) -> np.ndarray:
    return np.exp(-1j * g * dt * abs_squared(u)) * u


def nonlinear_phase(f: WaveField, g: float, dt: float) -> WaveField:
    """Exact flow of ``i u_t = g |u|^2 u``; the modulus never changes."""
    return f.with_values(phase_values(f.values, g, dt))
