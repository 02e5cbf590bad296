"""Finite-difference operators and the complex tridiagonal solver.

``A1 = (1/2) (1/dx^2) tridiag(1, -2, 1)`` acts on the ``M - 1`` interior
unknowns with homogeneous Dirichlet ends.  The nonlinear operator is the
diagonal ``|u_j|^2``; the interaction strength ``g`` is applied by the
schemes, never folded in here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import WaveField, abs_squared
from .grid import SpaceGrid


class SingularPivotError(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class Tridiag:
    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray

    def __post_init__(self):
        n = len(self.diag)
        if len(self.sub) != n - 1 or len(self.sup) != n - 1:
            raise ValueError("off-diagonals must have length len(diag) - 1")

    def __len__(self) -> int:
        return len(self.diag)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[:-1] += self.sup * x[1:]
        y[1:] += self.sub * x[:-1]
        return y

    def scaled(self, c: complex) -> "Tridiag":
        return Tridiag(c * self.sub, c * self.diag, c * self.sup)

    def plus_diagonal(self, d) -> "Tridiag":
        return Tridiag(self.sub, self.diag + d, self.sup)

    def to_dense(self) -> np.ndarray:
        n = len(self)
        A = np.zeros((n, n), dtype=np.result_type(self.diag, self.sub, complex))
        A[np.arange(n), np.arange(n)] = self.diag
        A[np.arange(n - 1), np.arange(1, n)] = self.sup
        A[np.arange(1, n), np.arange(n - 1)] = self.sub
        return A


def laplacian_half(grid: SpaceGrid) -> Tridiag:
    n = grid.M - 1
    off = np.full(n - 1, 0.5 / grid.dx ** 2)
    return Tridiag(off, np.full(n, -1.0 / grid.dx ** 2), off.copy())


def apply_laplacian_half(u: np.ndarray, dx: float) -> np.ndarray:
    """``A1 u`` for interior samples ``u`` with zero Dirichlet neighbours."""
    y = -2.0 * u
    y[:-1] += u[1:]
    y[1:] += u[:-1]
    return y * (0.5 / dx ** 2)


def cayley_factor(grid: SpaceGrid, alpha: float) -> Tridiag:
    """``I - i alpha A1``, the matrix inverted by every implicit linear substep."""
    return laplacian_half(grid).scaled(-1j * alpha).plus_diagonal(1.0)


def nonlinear_diag(f: WaveField) -> np.ndarray:
    return abs_squared(f)


def thomas_solve(A: Tridiag, b: np.ndarray) -> np.ndarray:
    """Solve ``A x = b`` by forward elimination and back substitution.

    No pivoting: the matrices built here are the identity plus an
    anti-Hermitian tridiagonal part (optionally with a diagonal shift), which
    keeps every pivot away from zero.
    """
    n = len(A)
    if len(b) != n:
        raise ValueError(f"right-hand side has length {len(b)}, expected {n}")
    # plain Python complex arithmetic is several times faster than numpy scalars here
    sub = A.sub.tolist()
    diag = A.diag.tolist()
    sup = A.sup.tolist()
    rhs = np.asarray(b, dtype=complex).tolist()
    scale = max(float(np.max(np.abs(A.diag))), 1e-300)
    tiny = 1e-14 * scale

    cp = [0j] * n
    rp = [0j] * n
    piv = diag[0]
    if abs(piv) < tiny:
        raise SingularPivotError("zero pivot in row 0")
    if n > 1:
        cp[0] = sup[0] / piv
    rp[0] = rhs[0] / piv
    for i in range(1, n):
        a = sub[i - 1]
        piv = diag[i] - a * cp[i - 1]
        if abs(piv) < tiny:
            raise SingularPivotError(f"zero pivot in row {i}")
        if i < n - 1:
            cp[i] = sup[i] / piv
        rp[i] = (rhs[i] - a * rp[i - 1]) / piv

    x = rp
    for i in range(n - 2, -1, -1):
        x[i] = rp[i] - cp[i] * x[i + 1]
    return np.array(x, dtype=complex)
