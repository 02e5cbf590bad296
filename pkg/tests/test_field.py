import numpy as np
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from gpesplit.field import (
    Layout, WaveField, abs_squared, as_layout, discrete_l2_sq, dirichlet, periodic,
    sample, zeros,
)

finite = st.floats(-1e3, 1e3, allow_nan=False)
vectors = arrays(np.complex128, st.integers(3, 64),
                 elements=st.builds(complex, finite, finite))


def test_abs_squared_values():
    f = dirichlet([3 + 4j, 1j, 0])
    assert np.array_equal(abs_squared(f), [25.0, 1.0, 0.0])


def test_l2_of_constant():
    assert discrete_l2_sq(periodic(np.ones(8)), 0.5) == 4.0


def test_layout_sizes(grid):
    assert len(zeros(grid, Layout.DIRICHLET)) == grid.M - 1
    assert len(zeros(grid, Layout.PERIODIC)) == grid.M


def test_nodes_closure(grid):
    f = sample(lambda x: np.exp(-x ** 2), grid, Layout.PERIODIC)
    nodes = f.nodes()
    assert len(nodes) == grid.M + 1 and nodes[-1] == nodes[0]
    d = as_layout(f, Layout.DIRICHLET)
    assert len(d) == grid.M - 1
    assert d.nodes()[0] == 0 and d.nodes()[-1] == 0
    back = as_layout(d, Layout.PERIODIC)
    assert back.values[0] == 0 and np.array_equal(back.values[1:], d.values)


@given(vectors, st.floats(0, 2 * np.pi))
def test_l2_phase_invariance(u, theta):
    a = discrete_l2_sq(u, 0.1)
    b = discrete_l2_sq(np.exp(1j * theta) * u, 0.1)
    assert abs(a - b) <= 1e-13 * max(a, 1e-300) + 1e-300


@given(vectors)
def test_abs_squared_sums_to_l2(u):
    f = WaveField(u, Layout.PERIODIC)
    assert np.all(abs_squared(f) >= 0)
    assert np.sum(abs_squared(f)) == discrete_l2_sq(f, 1.0)
