"""Finite-difference comparator: operator, bootstrap and convergence."""

import numpy as np
import pytest

from perisine.errors import ConfigurationError, DivergenceError
from perisine.kernel import KernelSpec
from perisine.reference import build_fd_grid, fd_apply_L, fd_evolve
from perisine.scenarios import ScenarioSpec, exact_classical_kink, initial_condition_at
from perisine.analysis import relative_l2_error


def test_grid_construction():
    g = build_fd_grid(10, -1, 3)
    assert g.nodes[0] == -1 and g.nodes[-1] == 3 and g.spacing == 0.4
    assert np.abs(np.diff(g.nodes) - 0.4).max() <= 1e-15
    with pytest.raises(ConfigurationError):
        build_fd_grid(1, -1, 1)
    with pytest.raises(ConfigurationError):
        build_fd_grid(10, 1, -1)


def test_constants_annihilated():
    g = build_fd_grid(64, -1, 1)
    spec = KernelSpec(0.4, 0.3, g.spacing)
    assert np.abs(fd_apply_L(g, spec, np.full(65, 2.2))).max() == 0.0


def test_quadratic_field_against_moment_integral():
    # trapezoid error shrinks with resolution toward the closed form
    rel = []
    for m in (128, 256, 512):
        g = build_fd_grid(m, -1, 1)
        spec = KernelSpec(0.4, 0.3, g.spacing)
        out = fd_apply_L(g, spec, g.nodes**2)
        full = (g.nodes - 0.3 >= -1) & (g.nodes + 0.3 <= 1)
        target = 2 * (0.3 ** 1.2 - g.spacing ** 1.2) / 1.2
        rel.append(np.abs(out[full] / target - 1).max())
    assert rel[0] < 0.05 and rel[-1] < 0.02
    assert rel[0] > rel[1] > rel[2]


def test_brute_force_double_loop():
    g = build_fd_grid(16, -1, 1)
    spec = KernelSpec(0.4, 0.5, g.spacing)
    rng = np.random.default_rng(5)
    u = rng.normal(size=17)
    out = fd_apply_L(g, spec, u)
    tw = np.full(17, g.spacing)
    tw[0] *= 0.5
    tw[-1] *= 0.5
    ref = np.zeros(17)
    for i in range(17):
        for j in range(17):
            if j == i:
                continue
            r = abs(g.nodes[i] - g.nodes[j])
            rr = round(r / g.spacing) * g.spacing  # offsets are exact multiples
            if spec.cutoff <= rr <= spec.delta:
                ref[i] += tw[j] * rr ** -1.8 * (u[j] - u[i])
    assert np.abs(out - ref).max() <= 1e-12


def test_uniform_row_sums_equal_interior():
    # on the uniform grid every full-horizon interior node has an identical
    # pair-weight row sum (the discrete counterpart of beta)
    g = build_fd_grid(100, -1, 1)
    spec = KernelSpec(0.4, 0.2, g.spacing)
    ones = np.ones(101)
    probe = np.zeros(101)
    sums = []
    for i in (30, 40, 50, 60, 70):
        probe[:] = 0.0
        probe[i] = 1.0
        # row sum of weights = -L(e_i)[i] with the diffusive sign
        sums.append(-fd_apply_L(g, spec, probe)[i])
    assert np.abs(np.diff(sums)).max() <= 1e-12 * abs(sums[0])


def test_equilibrium_unchanged():
    g = build_fd_grid(64, -1, 1)
    spec = KernelSpec(0.4, 0.3, g.spacing)
    out = fd_evolve(g, spec, np.full(65, np.pi), np.zeros(65), 1e-3, 50)
    assert np.abs(out - np.pi).max() == 0.0


def test_bootstrap_first_step():
    g = build_fd_grid(32, -1, 1)
    spec = KernelSpec(0.4, 0.3, g.spacing)
    rng = np.random.default_rng(11)
    u0 = np.cos(np.pi * g.nodes)
    v0 = rng.normal(size=33) * 0.1
    dt = 1e-3
    got = fd_evolve(g, spec, u0, v0, dt, 1)
    f0 = fd_apply_L(g, spec, u0) - np.sin(u0)
    expect = u0 + dt * v0 + 0.5 * dt**2 * f0
    assert np.abs(got - expect).max() <= 1e-15


def test_classical_variant_second_order_on_exact_kink():
    c, T = 0.5, 1.0
    errs = []
    for m in (200, 400):
        g = build_fd_grid(m, -20, 20)
        u0, v0 = initial_condition_at(ScenarioSpec("kink", c=c), g.nodes)
        dt = 2e-4
        u = fd_evolve(g, None, u0, v0, dt, int(round(T / dt)),
                      model="classical", wave_speed=1.0)
        errs.append(relative_l2_error(u, exact_classical_kink(c, g.nodes, T)))
    rate = np.log(errs[0] / errs[1]) / np.log(2.0)
    # squared-ratio error definition: O(h^2) rms appears as rate ~ 4
    assert 3.2 <= rate <= 4.8
    assert errs[1] < 1e-6


def test_divergence_detection():
    g = build_fd_grid(64, -1, 1)
    spec = KernelSpec(0.4, 0.3, g.spacing)
    u0 = np.sin(np.pi * g.nodes)
    with pytest.raises(DivergenceError):
        fd_evolve(g, spec, u0, np.zeros(65), 50.0, 10)


def test_model_validation():
    g = build_fd_grid(16, -1, 1)
    with pytest.raises(ConfigurationError):
        fd_evolve(g, None, np.zeros(17), np.zeros(17), 1e-3, 1)
    with pytest.raises(ConfigurationError):
        fd_evolve(g, None, np.zeros(17), np.zeros(17), 1e-3, 1, model="classical")
    with pytest.raises(ConfigurationError):
        fd_evolve(g, KernelSpec(0.4, 0.3, 0.01), np.zeros(17), np.zeros(17), 1e-3, 1,
                  model="mystery")
