import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gpesplit.field import Layout, discrete_l2_sq
from gpesplit.grid import build_grid
from gpesplit.solitons import (
    BENCHMARK_SOLITON, SolitonParams, bright_soliton, exact_single_soliton, gpe_residual,
    initial_single_soliton, initial_two_solitons,
)

GRID = build_grid(40.0, 512)


def test_benchmark_soliton_peak():
    x = GRID.points
    u = exact_single_soliton(x, 0.0)
    j = np.argmax(np.abs(u))
    assert x[j] == 25.0 and abs(abs(u[j]) - 1.0) < 1e-15


def test_initial_data_equals_closed_form():
    f = initial_single_soliton(GRID, Layout.PERIODIC)
    assert np.array_equal(f.values, exact_single_soliton(GRID.periodic, 0.0))


def test_boundary_tail():
    # the tail at the nearer edge is sech(15/sqrt 2), about 5e-5
    right, left = np.abs(exact_single_soliton(np.array([40.0, -40.0]), 0.0))
    assert right == pytest.approx(1 / np.cosh(15 / np.sqrt(2)), rel=1e-12)
    assert right < 1e-4 and left < 1e-19


@settings(max_examples=30)
@given(st.floats(0, 10))
def test_modulus_translates(t):
    x = np.linspace(-40, 40, 201)
    a = np.abs(exact_single_soliton(x, t))
    b = np.abs(exact_single_soliton(x - t / 10, 0.0))
    assert np.max(np.abs(a - b)) < 1e-14


@pytest.mark.parametrize("t", [0.0, 2.5, 5.0, 10.0])
def test_mass_is_time_independent(t):
    m = discrete_l2_sq(exact_single_soliton(GRID.periodic, t), GRID.dx)
    m0 = discrete_l2_sq(exact_single_soliton(GRID.periodic, 0.0), GRID.dx)
    assert abs(m - 2 * np.sqrt(2)) < 1e-6 * 2 * np.sqrt(2)
    assert abs(m - m0) < 1e-8 * m0


def test_two_soliton_peaks():
    f = initial_two_solitons(GRID, Layout.PERIODIC)
    x, a = GRID.periodic, np.abs(f.values)
    left, right = x < 0, x > 0
    assert abs(x[left][np.argmax(a[left])] + 20) < GRID.dx
    assert abs(x[right][np.argmax(a[right])] - 20) < GRID.dx
    # printed widths differ, so the pulses carry different mass
    ml = discrete_l2_sq(a[left], GRID.dx)
    mr = discrete_l2_sq(a[right], GRID.dx)
    assert mr == pytest.approx(np.sqrt(2) * ml, rel=1e-6)
    sym = initial_two_solitons(GRID, Layout.PERIODIC, symmetric_width=True)
    assert discrete_l2_sq(sym, GRID.dx) == pytest.approx(2 * mr, rel=1e-6)


def test_speeds_give_unit_amplitude():
    assert BENCHMARK_SOLITON.A0 == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        SolitonParams.from_speeds(0.0, 1.0)


def test_bright_soliton_solves_equation():
    x = np.linspace(0, 50, 100)
    r = gpe_residual(bright_soliton, x, np.full_like(x, 3.0))
    assert np.max(np.abs(r)) < 1e-8


@settings(max_examples=15, deadline=None)
@given(st.floats(0.5, 2.0), st.floats(-0.5, 0.5), st.floats(-2.0, -0.25))
def test_bright_soliton_family(amplitude, velocity, g):
    def u(x, t):
        return bright_soliton(x, t, amplitude, velocity, 0.0, g)
    x = np.linspace(-5, 5, 50)
    r = gpe_residual(u, x, np.zeros_like(x), g=g)
    assert np.max(np.abs(r)) < 1e-6


def test_benchmark_formula_is_not_a_solution():
    x = np.linspace(15, 35, 100)
    r = gpe_residual(exact_single_soliton, x, np.ones_like(x))
    assert np.max(np.abs(r)) > 0.1
