"""Conserved-quantity functionals and the space-time error norm.

All integrals use the trapezoid rule on the stored samples (zero Dirichlet
ends or periodic closure).  The impulse uses central differences; the
kinetic energy uses forward differences on the links ``x_j .. x_{j+1}``, which
makes ``-<u, A1 u>`` exactly the discrete kinetic term.
"""
from __future__ import annotations

from dataclasses import astuple, dataclass, fields

import numpy as np

from .field import Layout, WaveField, abs_squared, discrete_l2_sq
from .grid import SpaceGrid, TimeMesh


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    mass: float
    impulse_re: float
    impulse_im: float
    energy_paper: float
    energy_std: float
    l2err_sq: float

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_tuple(self) -> tuple:
        return astuple(self)


def _neighbours(f: WaveField) -> tuple[np.ndarray, np.ndarray]:
    u = f.values
    if f.layout is Layout.PERIODIC:
        return np.roll(u, 1), np.roll(u, -1)
    padded = np.concatenate(([0j], u, [0j]))
    return padded[:-2], padded[2:]


def _link_derivative(f: WaveField, dx: float) -> np.ndarray:
    u = f.values
    if f.layout is Layout.PERIODIC:
        return (np.roll(u, -1) - u) / dx
    return np.diff(np.concatenate(([0j], u, [0j]))) / dx


def _derivative(f: WaveField, dx: float) -> np.ndarray:
    left, right = _neighbours(f)
    return (right - left) / (2.0 * dx)


def _second_derivative(f: WaveField, dx: float) -> np.ndarray:
    left, right = _neighbours(f)
    return (left - 2.0 * f.values + right) / dx ** 2


def mass(f: WaveField, grid: SpaceGrid) -> float:
    return discrete_l2_sq(f, grid.dx)


def impulse(f: WaveField, grid: SpaceGrid) -> complex:
    """``int conj(u) (-i u_x) dx``; the real part is the physical impulse."""
    ux = _derivative(f, grid.dx)
    return complex(grid.dx * np.sum(np.conj(f.values) * (-1j) * ux))


def energy_paper_complex(f: WaveField, grid: SpaceGrid, params) -> complex:
    u = f.values
    Hu = -0.5 * _second_derivative(f, grid.dx) + params.g * params.density(u) * u
    return complex(0.5 * grid.dx * np.sum(np.conj(u) * Hu))


def energy_paper(f: WaveField, grid: SpaceGrid, params) -> float:
    """``(1/2) int conj(u) H u dx`` with ``H = -d_xx/2 + g |u|^2``."""
    return energy_paper_complex(f, grid, params).real


def energy_std(f: WaveField, grid: SpaceGrid, params) -> float:
    """``int |u_x|^2 / 2 + (g / 2) |u|^4 dx``, the conserved NLS Hamiltonian.

    This discrete form is exactly invariant under the converged conservative
    Crank-Nicolson scheme.
    """
    ux = _link_derivative(f, grid.dx)
    rho = abs_squared(f)
    if params.sigma == 1.0:
        potential = 0.5 * params.g * rho ** 2
    else:
        potential = params.g * rho ** (params.sigma + 1) / (params.sigma + 1)
    return float(grid.dx * (0.5 * np.sum(abs_squared(ux)) + np.sum(potential)))


def spacetime_error_sq(num, ref, grid: SpaceGrid, mesh: TimeMesh) -> float:
    """``dt dx sum_n sum_i |ref - num|^2`` over levels ``n = 1..N``.

    Series are arrays of shape ``(N, points)``; a leading ``t = 0`` row
    (shape ``(N + 1, points)``) is accepted and skipped.  No square root is
    taken, see :func:`spacetime_error`.
    """
    num = np.asarray(num)
    ref = np.asarray(ref)
    if num.shape != ref.shape or num.ndim != 2:
        raise ValueError(f"series shapes differ or are not 2-D: {num.shape} vs {ref.shape}")
    if num.shape[0] == mesh.N + 1:
        num, ref = num[1:], ref[1:]
    elif num.shape[0] != mesh.N:
        raise ValueError(f"series has {num.shape[0]} levels, mesh has N = {mesh.N}")
    return float(mesh.dt * grid.dx * np.sum(abs_squared(ref - num)))


def spacetime_error(num, ref, grid: SpaceGrid, mesh: TimeMesh) -> float:
    return float(np.sqrt(spacetime_error_sq(num, ref, grid, mesh)))


def error_nodes(f: WaveField) -> np.ndarray:
    """Samples at ``x_1 .. x_M``, the points entering the error sum."""
    return f.nodes()[1:]


def record(f: WaveField, t: float, grid: SpaceGrid, params,
           l2err_sq: float = float("nan")) -> DiagnosticsRecord:
    p = impulse(f, grid)
    return DiagnosticsRecord(
        t=float(t),
        mass=mass(f, grid),
        impulse_re=p.real,
        impulse_im=p.imag,
        energy_paper=energy_paper(f, grid, params),
        energy_std=energy_std(f, grid, params),
        l2err_sq=float(l2err_sq),
    )
