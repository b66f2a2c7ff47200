"""Right-hand-side assembly for the nonlocal and classical models."""

import numpy as np
import pytest

from perisine.dynamics import DynamicsSpec, make_rhs, rhs, sine_force
from perisine.errors import ConfigurationError
from perisine.grid import build_grid
from perisine.kernel import KernelSpec, build_kernel_table, effective_stiffness


def nonlocal_setup(n=32, delta=0.3):
    g = build_grid(n, -1, 1)
    spec = KernelSpec(0.4, delta, g.min_spacing())
    table = build_kernel_table(spec, g)
    dyn = DynamicsSpec(model="nonlocal-quadrature", kernel=spec)
    return g, table, dyn


def test_sine_force():
    assert np.abs(sine_force(np.zeros(5))).max() == 0.0
    assert np.abs(sine_force(np.full(5, np.pi / 2)) - 1.0).max() == 0.0
    assert abs(sine_force(np.array([4 * np.arctan(1.0)]))[0]) <= 1e-15


@pytest.mark.parametrize("m", [-1, 0, 1, 3])
def test_equilibria(m):
    g, table, dyn = nonlocal_setup()
    u = np.full(g.n + 1, 2 * np.pi * m)
    out = rhs(dyn, g, table, u)
    assert np.abs(out).max() <= 1e-12


def test_equilibrium_at_pi():
    g, table, dyn = nonlocal_setup()
    u = np.full(g.n + 1, np.pi)
    assert np.abs(rhs(dyn, g, table, u)).max() <= 1e-12
    cdyn = DynamicsSpec(model="classical-local", wave_speed=1.0)
    assert np.abs(rhs(cdyn, g, None, u)).max() <= 1e-10


def test_classical_polynomial_example():
    g = build_grid(12, -1, 1)
    dyn = DynamicsSpec(model="classical-local", wave_speed=1.0)
    u = g.nodes_phys**2
    out = rhs(dyn, g, None, u)
    expect = 2.0 - np.sin(g.nodes_phys**2)
    assert np.abs(out[1:-1] - expect[1:-1]).max() <= 1e-10


def test_nonlocal_requires_table():
    g, table, dyn = nonlocal_setup()
    with pytest.raises(ConfigurationError):
        rhs(dyn, g, None, np.zeros(g.n + 1))


def test_spec_validation():
    with pytest.raises(ConfigurationError):
        DynamicsSpec(model="nonsense")
    with pytest.raises(ConfigurationError):
        DynamicsSpec(model="classical-local", wave_speed=0.0)
    with pytest.raises(ConfigurationError):
        DynamicsSpec(model="nonlocal-quadrature", kernel=None)


def test_classical_limit_correlation():
    # shrinking horizon: the rescaled quadrature operator correlates with
    # the local second derivative at interior nodes
    g = build_grid(256, -1, 1)
    u = np.sin(2.0 * g.nodes_phys) + 0.3 * np.cos(3.0 * g.nodes_phys)
    d2u = -(4.0 * np.sin(2.0 * g.nodes_phys)) - 0.3 * 9.0 * np.cos(3.0 * g.nodes_phys)
    for delta in (0.1, 0.05):
        spec = KernelSpec(0.4, delta, 1e-4)
        table = build_kernel_table(spec, g, quadrature="kernel-weighted")
        from perisine.kernel import apply_L_quadrature

        out = apply_L_quadrature(table, g, u) / effective_stiffness(spec)
        interior = (g.nodes_phys - delta >= -1) & (g.nodes_phys + delta <= 1)
        a, b = out[interior], d2u[interior]
        cosine = float(a @ b / np.sqrt((a @ a) * (b @ b)))
        assert cosine >= 0.99
