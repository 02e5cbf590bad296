"""Single-step time integrators for ``i u_t = -u_xx / 2 + g |u|^(2 sigma) u``.

In operator form the semi-discrete equation is ``U' = i A1 U - i g D(U) U``
with ``A1`` the halved FD Laplacian and ``D(U) = diag |U|^(2 sigma)``.

Finite-difference schemes act on Dirichlet fields (interior unknowns);
spectral and mixed schemes act on periodic fields.  Mixed schemes reset the
boundary sample ``u_0`` to zero after each finite-difference substep.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple

import numpy as np

from .field import Layout, WaveField, discrete_l2
from .grid import SpaceGrid
from .linops import apply_laplacian_half, cayley_factor, thomas_solve
from .spectral import phase_values, propagate_values


class Scheme(str, Enum):
    IMPLICIT_EULER = "implicit-euler"
    CRANK_NICOLSON = "crank-nicolson"
    CONSERVATIVE_CN = "conservative-cn"
    AB_FD_IMPLICIT = "ab-fd-implicit"
    AB_FD_EXPLICIT = "ab-fd-explicit"
    TSSP = "tssp"
    AB_SPEC_SPEC = "ab-spec-spec"
    AB_SPEC_FD = "ab-spec-fd"
    AB_FD_SPEC = "ab-fd-spec"
    AB_FD_FD = "ab-fd-fd"
    ABA_SPEC = "aba-spec"
    BAB_SPEC = "bab-spec"
    ABA_CN = "aba-cn"
    ABA_ICN = "aba-icn"
    HALF_AB_BA = "half-ab-ba"


@dataclass(frozen=True)
class ModelParams:
    g: float = -1.0
    sigma: float = 1.0

    def density(self, u: np.ndarray) -> np.ndarray:
        rho = u.real ** 2 + u.imag ** 2
        return rho if self.sigma == 1.0 else rho ** self.sigma


@dataclass(frozen=True)
class SchemeConfig:
    kind: Scheme = Scheme.TSSP
    picard_tol: float = 1e-5
    picard_max: int = 5

    def __post_init__(self):
        object.__setattr__(self, "kind", Scheme(self.kind))
        if not self.picard_tol > 0:
            raise ValueError("picard_tol must be positive")
        if int(self.picard_max) != self.picard_max or self.picard_max < 1:
            raise ValueError("picard_max must be a positive integer")


class PicardResult(NamedTuple):
    field: WaveField
    iterations: int
    converged: bool


def _check(f: WaveField, layout: Layout, grid: SpaceGrid):
    if f.layout is not layout or len(f) != layout.size(grid):
        raise ValueError(
            f"expected a {layout.value} field with {layout.size(grid)} samples, "
            f"got {f.layout.value} with {len(f)}")


def _fd_explicit_linear(u: np.ndarray, dt: float, dx: float) -> np.ndarray:
    return u + 1j * dt * apply_laplacian_half(u, dx)


def _on_interior(u: np.ndarray, op) -> np.ndarray:
    # periodic storage, FD substep on x_1..x_{M-1}; u_0 = u_M = 0 afterwards
    out = np.empty_like(u)
    out[0] = 0.0
    out[1:] = op(u[1:])
    return out


# --- finite-difference schemes (Dirichlet) ---------------------------------

def step_implicit_euler(f: WaveField, dt: float, grid: SpaceGrid,
                        params: ModelParams) -> WaveField:
    """``(I - i dt (A1 - g D(U^n))) U^{n+1} = U^n``."""
    _check(f, Layout.DIRICHLET, grid)
    u = f.values
    A = cayley_factor(grid, dt).plus_diagonal(1j * dt * params.g * params.density(u))
    return f.with_values(thomas_solve(A, u))


def step_crank_nicolson(f: WaveField, dt: float, grid: SpaceGrid,
                        params: ModelParams) -> WaveField:
    _check(f, Layout.DIRICHLET, grid)
    u = f.values
    d = params.density(u)
    Hu = apply_laplacian_half(u, grid.dx) - params.g * d * u
    A = cayley_factor(grid, 0.5 * dt).plus_diagonal(0.5j * dt * params.g * d)
    return f.with_values(thomas_solve(A, u + 0.5j * dt * Hu))


def step_conservative_cn(f: WaveField, dt: float, grid: SpaceGrid,
                         params: ModelParams, cfg: SchemeConfig) -> PicardResult:
    """Semi-implicit CN with the nonlinearity averaged over both time levels,
    solved by Picard iteration starting from ``U^n``."""
    _check(f, Layout.DIRICHLET, grid)
    u = f.values
    d0 = params.density(u)
    A = cayley_factor(grid, 0.5 * dt)
    base = u + 0.5j * dt * apply_laplacian_half(u, grid.dx)
    prev = u
    for k in range(1, cfg.picard_max + 1):
        avg = 0.25 * (params.density(prev) + d0) * (prev + u)
        new = thomas_solve(A, base - 1j * dt * params.g * avg)
        increment = discrete_l2(new - prev, grid.dx)
        prev = new
        if increment <= cfg.picard_tol:
            return PicardResult(f.with_values(new), k, True)
    return PicardResult(f.with_values(prev), cfg.picard_max, False)


def step_ab_fd_implicit(f: WaveField, dt: float, grid: SpaceGrid,
                        params: ModelParams) -> WaveField:
    """Explicit nonlinear substep, then implicit Euler for the Laplacian."""
    _check(f, Layout.DIRICHLET, grid)
    u = f.values
    rhs = u - 1j * dt * params.g * params.density(u) * u
    return f.with_values(thomas_solve(cayley_factor(grid, dt), rhs))


def step_ab_fd_explicit(f: WaveField, dt: float, grid: SpaceGrid,
                        params: ModelParams) -> WaveField:
    """Forward Euler for the whole right-hand side; unstable unless dt << dx^2."""
    _check(f, Layout.DIRICHLET, grid)
    u = f.values
    du = apply_laplacian_half(u, grid.dx) - params.g * params.density(u) * u
    return f.with_values(u + 1j * dt * du)


def step_ab_fd_fd(f: WaveField, dt: float, grid: SpaceGrid,
                  params: ModelParams) -> WaveField:
    _check(f, Layout.DIRICHLET, grid)
    u = f.values
    u1 = u - 1j * dt * params.g * params.density(u) * u
    return f.with_values(_fd_explicit_linear(u1, dt, grid.dx))


def step_aba_cn(f: WaveField, dt: float, grid: SpaceGrid,
                params: ModelParams) -> WaveField:
    """Implicit half step, exact phase with the lagged density, explicit half step."""
    _check(f, Layout.DIRICHLET, grid)
    u = f.values
    u1 = thomas_solve(cayley_factor(grid, 0.5 * dt), u)
    u2 = np.exp(-1j * params.g * dt * params.density(u)) * u1
    return f.with_values(u2 + 0.5j * dt * apply_laplacian_half(u2, grid.dx))


def step_aba_icn(f: WaveField, dt: float, grid: SpaceGrid,
                 params: ModelParams, cfg: SchemeConfig) -> PicardResult:
    """ABA-CN sweep repeated with the density averaged between ``U^n`` and the
    previous iterate."""
    _check(f, Layout.DIRICHLET, grid)
    u = f.values
    d0 = params.density(u)
    u1 = thomas_solve(cayley_factor(grid, 0.5 * dt), u)
    prev = u
    for k in range(1, cfg.picard_max + 1):
        avg = 0.5 * (d0 + params.density(prev))
        u2 = np.exp(-1j * params.g * dt * avg) * u1
        new = u2 + 0.5j * dt * apply_laplacian_half(u2, grid.dx)
        increment = discrete_l2(new - prev, grid.dx)
        prev = new
        if increment <= cfg.picard_tol:
            return PicardResult(f.with_values(new), k, True)
    return PicardResult(f.with_values(prev), cfg.picard_max, False)


def step_half_ab_ba_iter(f: WaveField, dt: float, grid: SpaceGrid,
                         params: ModelParams, cfg: SchemeConfig) -> PicardResult:
    """Iterated half-AB / half-BA sweep.

    Each iteration ``k`` performs

    1. ``(I - i dt/2 A1) W = U^n - i dt/2 g (D(U_{k-1}) + D(U^n)) U_{k-1} / 2``
    2. ``U_k = W + i dt/2 A1 W - i dt/2 g (D(U_{k-1}) + D(W)) W / 2``

    starting from ``U_0 = U^n``.
    """
    _check(f, Layout.DIRICHLET, grid)
    u = f.values
    g = params.g
    d0 = params.density(u)
    A = cayley_factor(grid, 0.5 * dt)
    prev = u
    for k in range(1, cfg.picard_max + 1):
        dp = params.density(prev)
        w = thomas_solve(A, u - 0.25j * dt * g * (dp + d0) * prev)
        new = (w + 0.5j * dt * apply_laplacian_half(w, grid.dx)
               - 0.25j * dt * g * (dp + params.density(w)) * w)
        increment = discrete_l2(new - prev, grid.dx)
        prev = new
        if increment <= cfg.picard_tol:
            return PicardResult(f.with_values(new), k, True)
    return PicardResult(f.with_values(prev), cfg.picard_max, False)


# --- spectral and mixed schemes (periodic) ---------------------------------

def _phase(u, params: ModelParams, dt):
    if params.sigma == 1.0:
        return phase_values(u, params.g, dt)
    return np.exp(-1j * params.g * dt * params.density(u)) * u


def step_tssp(f: WaveField, dt: float, grid: SpaceGrid,
              params: ModelParams) -> WaveField:
    """Strang: half nonlinear phase, full free propagation, half nonlinear phase."""
    _check(f, Layout.PERIODIC, grid)
    u = _phase(f.values, params, 0.5 * dt)
    u = propagate_values(u, dt, grid)
    return f.with_values(_phase(u, params, 0.5 * dt))


step_bab_spec = step_tssp


def step_aba_spec(f: WaveField, dt: float, grid: SpaceGrid,
                  params: ModelParams) -> WaveField:
    _check(f, Layout.PERIODIC, grid)
    u = propagate_values(f.values, 0.5 * dt, grid)
    u = _phase(u, params, dt)
    return f.with_values(propagate_values(u, 0.5 * dt, grid))


def step_ab_spec_spec(f: WaveField, dt: float, grid: SpaceGrid,
                      params: ModelParams) -> WaveField:
    _check(f, Layout.PERIODIC, grid)
    u = _phase(f.values, params, dt)
    return f.with_values(propagate_values(u, dt, grid))


def step_ab_spec_fd(f: WaveField, dt: float, grid: SpaceGrid,
                    params: ModelParams) -> WaveField:
    """Exact nonlinear phase, then forward Euler on the FD Laplacian."""
    _check(f, Layout.PERIODIC, grid)
    u = _phase(f.values, params, dt)
    return f.with_values(_on_interior(u, lambda w: _fd_explicit_linear(w, dt, grid.dx)))


def step_ab_fd_spec(f: WaveField, dt: float, grid: SpaceGrid,
                    params: ModelParams) -> WaveField:
    """Forward Euler on the nonlinearity, then exact free propagation."""
    _check(f, Layout.PERIODIC, grid)
    u = f.values
    g = params.g
    u = _on_interior(u, lambda w: w - 1j * dt * g * params.density(w) * w)
    return f.with_values(propagate_values(u, dt, grid))


@dataclass(frozen=True)
class SchemeInfo:
    step: Callable
    layout: Layout
    iterative: bool = False


SCHEMES: dict[Scheme, SchemeInfo] = {
    Scheme.IMPLICIT_EULER: SchemeInfo(step_implicit_euler, Layout.DIRICHLET),
    Scheme.CRANK_NICOLSON: SchemeInfo(step_crank_nicolson, Layout.DIRICHLET),
    Scheme.CONSERVATIVE_CN: SchemeInfo(step_conservative_cn, Layout.DIRICHLET, True),
    Scheme.AB_FD_IMPLICIT: SchemeInfo(step_ab_fd_implicit, Layout.DIRICHLET),
    Scheme.AB_FD_EXPLICIT: SchemeInfo(step_ab_fd_explicit, Layout.DIRICHLET),
    Scheme.TSSP: SchemeInfo(step_tssp, Layout.PERIODIC),
    Scheme.AB_SPEC_SPEC: SchemeInfo(step_ab_spec_spec, Layout.PERIODIC),
    Scheme.AB_SPEC_FD: SchemeInfo(step_ab_spec_fd, Layout.PERIODIC),
    Scheme.AB_FD_SPEC: SchemeInfo(step_ab_fd_spec, Layout.PERIODIC),
    Scheme.AB_FD_FD: SchemeInfo(step_ab_fd_fd, Layout.DIRICHLET),
    Scheme.ABA_SPEC: SchemeInfo(step_aba_spec, Layout.PERIODIC),
    Scheme.BAB_SPEC: SchemeInfo(step_bab_spec, Layout.PERIODIC),
    Scheme.ABA_CN: SchemeInfo(step_aba_cn, Layout.DIRICHLET),
    Scheme.ABA_ICN: SchemeInfo(step_aba_icn, Layout.DIRICHLET, True),
    Scheme.HALF_AB_BA: SchemeInfo(step_half_ab_ba_iter, Layout.DIRICHLET, True),
}


def scheme_layout(kind: Scheme | str) -> Layout:
    return SCHEMES[Scheme(kind)].layout


def advance(f: WaveField, dt: float, grid: SpaceGrid, params: ModelParams,
            cfg: SchemeConfig) -> PicardResult:
    """One step of ``cfg.kind``; direct schemes report one iteration."""
    info = SCHEMES[cfg.kind]
    if info.iterative:
        return info.step(f, dt, grid, params, cfg)
    return PicardResult(info.step(f, dt, grid, params), 1, True)

