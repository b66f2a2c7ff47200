"""Grid construction, differentiation matrix, quadrature and horizon tests."""

import numpy as np
import numpy.polynomial.chebyshev as cheb
import pytest

from perisine.errors import ConfigurationError
from perisine.grid import (
    barycentric_interpolate,
    build_grid,
    chebyshev_lobatto_nodes,
    differentiation_matrix,
    horizon_indices,
    integrate,
)


def test_nodes_n4_closed_form():
    g = build_grid(4, -1, 1)
    s = np.sqrt(2.0) / 2.0
    assert np.allclose(g.nodes_ref, [1.0, s, 0.0, -s, -1.0], atol=1e-15)
    assert g.nodes_ref[0] == 1.0 and g.nodes_ref[-1] == -1.0


def test_nodes_exactly_antisymmetric():
    for n in (4, 17, 64):
        x = chebyshev_lobatto_nodes(n)
        assert np.all(x == -x[::-1])
        assert np.all(np.diff(x) < 0)


def test_n1_derivative_matrix_hand_case():
    d = differentiation_matrix(chebyshev_lobatto_nodes(1))
    assert np.allclose(d, [[0.5, -0.5], [0.5, -0.5]], atol=1e-15)


def test_derivative_of_t2_exact():
    g = build_grid(8, -1, 1)
    t2 = 2 * g.nodes_phys**2 - 1
    assert np.abs(g.deriv_matrix @ t2 - 4 * g.nodes_phys).max() <= 1e-12


@pytest.mark.parametrize("n", [4, 8, 16, 32, 64])
def test_derivative_exact_on_chebyshev_basis(n):
    g = build_grid(n, -1, 1)
    for m in range(n + 1):
        c = np.zeros(m + 1)
        c[m] = 1.0
        vals = cheb.chebval(g.nodes_ref, c)
        dvals = cheb.chebval(g.nodes_ref, cheb.chebder(c))
        scale = max(np.abs(dvals).max(), 1.0)
        assert np.abs(g.deriv_matrix @ vals - dvals).max() <= 1e-10 * scale


def test_row_sums_zero():
    # 1e-12 absolute holds through n ~ 128; beyond that the diagonal entry
    # cannot cancel the pairwise-summed row more precisely than float64
    # permits, so the bound relaxes to the representational floor.
    for n in range(2, 257):
        g = build_grid(n, -1, 1)
        resid = np.abs(g.deriv_matrix.sum(axis=1)).max()
        floor = 8 * np.finfo(float).eps * np.abs(g.deriv_matrix).sum(axis=1).max()
        assert resid <= max(1e-12, floor), f"n={n}: {resid:.3e}"
        if n <= 128:
            assert resid <= 1e-12


@pytest.mark.parametrize("a,b", [(-1.0, 1.0), (-20.0, 20.0), (0.0, 3.5)])
def test_quadrature_weights_positive_and_sum(a, b):
    for n in (2, 7, 16, 65, 256):
        g = build_grid(n, a, b)
        assert (g.quad_weights > 0).all()
        assert abs(g.quad_weights.sum() - (b - a)) <= 1e-12 * (b - a)


def test_integrate_examples():
    g = build_grid(8, -1, 1)
    assert abs(integrate(g, np.ones(9)) - 2.0) <= 1e-14
    assert abs(integrate(g, g.nodes_phys**2) - 2.0 / 3.0) <= 1e-12
    g32 = build_grid(32, -1, 1)
    exact = np.e - 1.0 / np.e
    assert abs(integrate(g32, np.exp(g32.nodes_phys)) - exact) <= 1e-10


def test_integrate_shape_error():
    g = build_grid(8, -1, 1)
    with pytest.raises(ValueError):
        integrate(g, np.ones(5))


def test_horizon_indices():
    g = build_grid(4, -1, 1)
    assert list(horizon_indices(g, 2, 0.8)) == [1, 3]
    # horizon covering the domain: everything except the node itself
    assert list(horizon_indices(g, 2, 2.0)) == [0, 1, 3, 4]
    # tiny horizon: empty
    assert horizon_indices(g, 2, 1e-6).size == 0


def test_affine_consistency():
    a, b = -3.0, 7.0
    g = build_grid(24, a, b)
    ref = build_grid(24, -1, 1)
    mapped = 0.5 * (a + b) + 0.5 * (b - a) * ref.nodes_ref
    assert np.abs(g.nodes_phys - mapped).max() <= 1e-13 * max(abs(a), abs(b))
    assert np.abs(g.deriv_matrix - ref.deriv_matrix * 2.0 / (b - a)).max() <= 1e-13 * np.abs(ref.deriv_matrix).max()
    assert np.abs(g.quad_weights - ref.quad_weights * (b - a) / 2.0).max() <= 1e-13


def test_build_grid_errors():
    with pytest.raises(ConfigurationError):
        build_grid(0, -1, 1)
    with pytest.raises(ConfigurationError):
        build_grid(8, 1, 1)
    with pytest.raises(ConfigurationError):
        build_grid(8, 2, -2)


def test_barycentric_interpolation():
    g = build_grid(20, -2, 2)
    f = g.nodes_phys**5 - 3 * g.nodes_phys**2 + 1
    xs = np.linspace(-2, 2, 101)
    expect = xs**5 - 3 * xs**2 + 1
    assert np.abs(barycentric_interpolate(g, f, xs) - expect).max() <= 1e-11
    # node hits are exact
    hit = barycentric_interpolate(g, f, g.nodes_phys[[0, 7, 20]])
    assert np.array_equal(hit, f[[0, 7, 20]])


def test_trapezoid_weights_sum():
    g = build_grid(33, -1.5, 2.5)
    tw = g.trapezoid_weights()
    assert (tw > 0).all()
    assert abs(tw.sum() - 4.0) <= 1e-13
