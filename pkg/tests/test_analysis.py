"""Energy functional, relative errors, rate fitting."""

import numpy as np
import pytest

from perisine.analysis import (
    energy,
    fit_rate,
    make_error_report,
    pairwise_rates,
    relative_l2_error,
    relative_rms_error,
)
from perisine.errors import ConfigurationError
from perisine.grid import build_grid
from perisine.kernel import KernelSpec, build_kernel_table


def setup(n=32):
    g = build_grid(n, -1, 1)
    spec = KernelSpec(0.4, 0.3, g.min_spacing())
    return g, build_kernel_table(spec, g)


def test_energy_zero_state():
    g, t = setup()
    e = energy(g, t, np.zeros(g.n + 1), np.zeros(g.n + 1))
    assert e.kinetic == e.nonlocal_ == e.potential == 0.0
    assert e.total_printed == e.total_hamiltonian == 0.0


def test_energy_zero_velocity_has_no_kinetic():
    g, t = setup()
    e = energy(g, t, np.sin(g.nodes_phys), np.zeros(g.n + 1))
    assert e.kinetic == 0.0
    assert e.nonlocal_ > 0 and e.potential > 0


def test_energy_constant_pi_closed_form():
    g, t = setup()
    e = energy(g, t, np.full(g.n + 1, np.pi), np.zeros(g.n + 1))
    assert abs(e.potential - 4.0) <= 1e-12
    assert abs(e.nonlocal_) <= 1e-12
    assert abs(e.total_printed + 4.0) <= 1e-12
    assert abs(e.total_hamiltonian - 4.0) <= 1e-12


def test_energy_components_nonnegative_and_shift_invariant():
    g, t = setup()
    rng = np.random.default_rng(0)
    u, v = rng.normal(size=g.n + 1), rng.normal(size=g.n + 1)
    e = energy(g, t, u, v)
    assert e.kinetic >= 0 and e.nonlocal_ >= 0 and e.potential >= 0
    shifted = energy(g, t, u + 11.0, v)
    assert abs(shifted.nonlocal_ - e.nonlocal_) <= 1e-10 * max(e.nonlocal_, 1.0)


def test_energy_node_quadrature_options():
    g, t = setup()
    u = np.sin(2 * g.nodes_phys)
    v = np.cos(g.nodes_phys)
    cc = energy(g, t, u, v, node_quadrature="clenshaw-curtis")
    tr = energy(g, t, u, v, node_quadrature="trapezoid")
    assert cc.nonlocal_ == tr.nonlocal_  # pair term shared
    assert abs(cc.kinetic - tr.kinetic) <= 5e-3 * cc.kinetic  # quadrature-level gap
    with pytest.raises(ConfigurationError):
        energy(g, t, u, v, node_quadrature="simpson")


def test_relative_l2_identities():
    ref = np.array([0.0, 1.0, 2.0, -1.0])
    assert relative_l2_error(ref, ref) == 0.0
    assert abs(relative_l2_error(2 * ref, ref) - 1.0) <= 1e-15
    assert abs(relative_rms_error(2 * ref, ref) - 1.0) <= 1e-15
    with pytest.raises(ValueError):
        relative_l2_error(np.zeros(3), np.zeros(4))
    with pytest.raises(ValueError):
        relative_l2_error(np.ones(4), np.zeros(4))


def test_relative_l2_skips_first_node():
    # sums run over node indices 1..N: index 0 does not contribute
    u = np.array([999.0, 1.0, 1.0])
    ref = np.array([1.0, 1.0, 1.0])
    assert relative_l2_error(u, ref) == 0.0


def test_fit_rate_exact_power_law():
    pairs = [(100, 1e-2), (200, 1e-2 / 4), (400, 1e-2 / 16)]
    assert abs(fit_rate(pairs) - 2.0) <= 1e-12
    report = make_error_report(pairs)
    assert np.abs(np.array(report.pairwise_rates) - 2.0).max() <= 1e-12
    assert report.fit_residual <= 1e-20


def test_two_point_rate_formula():
    rates = pairwise_rates([100, 200], [3e-3, 7.5e-4])
    assert abs(rates[0] - np.log(4.0) / np.log(2.0)) <= 1e-12


def test_fd_reference_column_rates():
    # published error column: pairwise two-point rates of those numbers
    # (the companion printed-rate column is internally inconsistent with
    # its own errors; see the decisions ledger)
    errors = [2.1336e-3, 4.7141e-4, 1.0768e-4, 1.8644e-5]
    rates = pairwise_rates([100, 200, 400, 800], errors)
    expect = [np.log(errors[i] / errors[i + 1]) / np.log(2.0) for i in range(3)]
    assert np.abs(np.array(rates) - expect).max() <= 1e-12
    assert np.abs(np.array(rates) - [2.18, 2.13, 2.53]).max() <= 0.01


def test_fit_rate_validation():
    with pytest.raises(ConfigurationError):
        fit_rate([(100, 1e-3)])
    with pytest.raises(ConfigurationError):
        fit_rate([(100, 1e-3), (200, -1.0)])
