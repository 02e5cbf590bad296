import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gpesplit.diagnostics import (
    DiagnosticsRecord, energy_paper, energy_paper_complex, energy_std, impulse, mass,
    record, spacetime_error, spacetime_error_sq,
)
from gpesplit.field import Layout, WaveField, sample, zeros
from gpesplit.grid import build_grid, build_time_mesh
from gpesplit.solitons import initial_single_soliton
from gpesplit.steppers import ModelParams

GRID = build_grid(40.0, 512)
MODEL = ModelParams()
SQ2 = np.sqrt(2.0)
K = 1 / 20

# closed-form integrals for sech(x / sqrt 2) exp(i x / 20)
KINETIC = 2 / (3 * SQ2) + K ** 2 * 2 * SQ2      # int |u_x|^2
QUARTIC = 4 * SQ2 / 3                            # int |u|^4


@pytest.fixture(params=[Layout.PERIODIC, Layout.DIRICHLET])
def soliton(request):
    return initial_single_soliton(GRID, request.param)


def test_record_columns():
    assert DiagnosticsRecord.columns() == [
        "t", "mass", "impulse_re", "impulse_im", "energy_paper", "energy_std", "l2err_sq"]


@pytest.mark.parametrize("layout", list(Layout))
def test_zero_field(layout):
    f = zeros(GRID, layout)
    r = record(f, 0.0, GRID, MODEL, 0.0)
    assert r.as_tuple()[1:] == (0.0,) * 6


def test_soliton_values(soliton):
    assert mass(soliton, GRID) == pytest.approx(2 * SQ2, rel=1e-6)
    assert impulse(soliton, GRID).real == pytest.approx(K * 2 * SQ2, rel=5e-3)
    assert energy_paper(soliton, GRID, MODEL) == pytest.approx(
        0.5 * (0.5 * KINETIC - QUARTIC), rel=1e-3)
    assert energy_std(soliton, GRID, MODEL) == pytest.approx(
        0.5 * KINETIC - 0.5 * QUARTIC, rel=1e-3)
    assert abs(energy_paper_complex(soliton, GRID, MODEL).imag) < 1e-10


def test_energy_regression_fixture():
    f = initial_single_soliton(GRID)
    assert energy_paper(f, GRID, MODEL) == pytest.approx(-0.8233613625566126, rel=1e-12)
    assert energy_std(f, GRID, MODEL) == pytest.approx(-0.7039136835311616, rel=1e-12)


def test_real_field_has_no_impulse():
    f = sample(lambda x: np.exp(-x ** 2 / 10), GRID, Layout.DIRICHLET)
    assert abs(impulse(f, GRID)) < 1e-12


def test_plane_wave_energy():
    l = 8
    mu = np.pi * l / GRID.L
    f = sample(lambda x: np.exp(1j * mu * x), GRID, Layout.PERIODIC)
    e = energy_paper(f, GRID, ModelParams(g=0.0))
    assert e == pytest.approx(0.5 * (mu ** 2 / 2) * mass(f, GRID), rel=1e-3)


def test_constant_modulus_interaction_term():
    f = sample(lambda x: 0.7 * np.exp(1j * np.pi * x / GRID.L), GRID, Layout.PERIODIC)
    free = energy_std(f, GRID, ModelParams(g=0.0))
    full = energy_std(f, GRID, MODEL)
    assert full - free == pytest.approx(-0.5 * 0.7 ** 4 * 2 * GRID.L, rel=1e-12)


@settings(max_examples=20)
@given(st.floats(0, 2 * np.pi))
def test_phase_invariance(theta):
    f = initial_single_soliton(GRID)
    h = f.with_values(np.exp(1j * theta) * f.values)
    a, b = record(f, 0.0, GRID, MODEL), record(h, 0.0, GRID, MODEL)
    for x, y in zip(a.as_tuple()[1:6], b.as_tuple()[1:6]):
        assert abs(x - y) < 1e-12


def test_spacetime_error_arithmetic():
    mesh = build_time_mesh(1.0, 10)
    rng = np.random.default_rng(0)
    a = rng.standard_normal((10, GRID.M)) + 0j
    assert spacetime_error_sq(a, a, GRID, mesh) == 0.0
    eps = 1e-3
    assert spacetime_error_sq(a, a + eps, GRID, mesh) == pytest.approx(
        mesh.dt * GRID.dx * 10 * GRID.M * eps ** 2, rel=1e-9)
    b = a + 1e-2 * rng.standard_normal(a.shape)
    assert spacetime_error_sq(a, b, GRID, mesh) == spacetime_error_sq(b, a, GRID, mesh) > 0
    assert spacetime_error(a, b, GRID, mesh) ** 2 == pytest.approx(
        spacetime_error_sq(a, b, GRID, mesh))
    with_t0 = np.vstack([np.zeros(GRID.M), a])
    assert spacetime_error_sq(with_t0, with_t0 + eps, GRID, mesh) == pytest.approx(
        spacetime_error_sq(a, a + eps, GRID, mesh))


def test_spacetime_error_rejects_mismatch():
    mesh = build_time_mesh(1.0, 10)
    with pytest.raises(ValueError):
        spacetime_error_sq(np.zeros((10, 4)), np.zeros((10, 5)), GRID, mesh)
    with pytest.raises(ValueError):
        spacetime_error_sq(np.zeros((7, 4)), np.zeros((7, 4)), GRID, mesh)
