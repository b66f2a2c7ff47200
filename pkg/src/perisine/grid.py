"""Chebyshev-Gauss-Lobatto collocation grid on a physical interval.

Nodes are x_h = cos(pi*h/N), h = 0..N, ordered descending (x_0 = +1),
affinely mapped to [a, b]. The grid carries the spectral differentiation
matrix in physical coordinates and Clenshaw-Curtis quadrature weights for
integrals with unit weight function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


def chebyshev_lobatto_nodes(n: int) -> np.ndarray:
    """Reference CGL nodes cos(pi*h/n), h = 0..n, descending.

    Evaluated as sin(pi*(n - 2h)/(2n)) so the node set is exactly
    antisymmetric (x_h == -x_{n-h} bitwise) and the endpoints and the
    midpoint (even n) are exact.
    """
    h = np.arange(n + 1)
    return np.sin(np.pi * (n - 2 * h) / (2 * n))


def differentiation_matrix(nodes: np.ndarray) -> np.ndarray:
    """Collocation differentiation matrix on CGL nodes.

    Off-diagonal entries follow the closed form d_ij = (c_i/c_j)(-1)^{i+j}
    / (x_i - x_j) with c_0 = c_N = 2, c_j = 1 otherwise; the diagonal is
    set by the negative-sum trick so rows annihilate constants, then
    corrected once against the recomputed row sum.
    """
    n = nodes.size - 1
    c = np.ones(n + 1)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(n + 1)
    dx = nodes[:, None] - nodes[None, :]
    d = np.outer(c, 1.0 / c) / (dx + np.eye(n + 1))
    np.fill_diagonal(d, 0.0)
    np.fill_diagonal(d, -d.sum(axis=1))
    # one correction pass: push the recomputed row sums to the rounding floor
    np.fill_diagonal(d, np.diag(d) - d.sum(axis=1))
    return d


def clenshaw_curtis_weights(n: int) -> np.ndarray:
    """Clenshaw-Curtis weights on the n+1 CGL nodes for int_{-1}^{1} f dx."""
    if n == 1:
        return np.array([1.0, 1.0])
    theta = np.pi * np.arange(n + 1) / n
    w = np.zeros(n + 1)
    v = np.ones(n - 1)
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n**2 - 1)
        for k in range(1, n // 2):
            v -= 2.0 * np.cos(2 * k * theta[1:n]) / (4 * k**2 - 1)
        v -= np.cos(n * theta[1:n]) / (n**2 - 1)
    else:
        w[0] = w[n] = 1.0 / n**2
        for k in range(1, (n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * k * theta[1:n]) / (4 * k**2 - 1)
    w[1:n] = 2.0 * v / n
    return w


@dataclass(frozen=True, eq=False)
class Grid:
    """Immutable CGL collocation grid on [a, b].

    Attributes
    ----------
    n : polynomial degree (n+1 nodes).
    a, b : physical interval endpoints, a < b.
    nodes_ref : reference nodes on [-1, 1], descending.
    nodes_phys : physical nodes, descending from b to a.
    jacobian : d(reference)/d(physical) = 2/(b - a).
    deriv_matrix : (n+1)x(n+1) spectral differentiation matrix, physical.
    quad_weights : Clenshaw-Curtis weights for int_a^b f dx.
    """

    n: int
    a: float
    b: float
    nodes_ref: np.ndarray
    nodes_phys: np.ndarray
    jacobian: float
    deriv_matrix: np.ndarray
    quad_weights: np.ndarray

    def trapezoid_weights(self) -> np.ndarray:
        """Composite trapezoid weights on the (nonuniform) physical nodes."""
        gaps = -np.diff(self.nodes_phys)  # positive, nodes descend
        w = np.zeros(self.n + 1)
        w[0] = 0.5 * gaps[0]
        w[-1] = 0.5 * gaps[-1]
        w[1:-1] = 0.5 * (gaps[:-1] + gaps[1:])
        return w

    def min_spacing(self) -> float:
        """Smallest gap between adjacent physical nodes."""
        return float(np.min(-np.diff(self.nodes_phys)))


def build_grid(n: int, a: float, b: float) -> Grid:
    """Construct the CGL grid of degree n on [a, b].

    n = 1 is accepted for hand-checkable cases even though production runs
    require n >= 2 (enforced at the configuration layer).
    """
    if n < 1:
        raise ConfigurationError(f"grid degree must be >= 1, got n={n}")
    if not b > a:
        raise ConfigurationError(f"degenerate interval: a={a} must be < b={b}")
    nodes_ref = chebyshev_lobatto_nodes(n)
    half = 0.5 * (b - a)
    nodes_phys = 0.5 * (a + b) + half * nodes_ref
    jac = 1.0 / half
    deriv = differentiation_matrix(nodes_ref) * jac
    weights = clenshaw_curtis_weights(n) * half
    return Grid(
        n=n,
        a=float(a),
        b=float(b),
        nodes_ref=nodes_ref,
        nodes_phys=nodes_phys,
        jacobian=jac,
        deriv_matrix=deriv,
        quad_weights=weights,
    )


def integrate(grid: Grid, f: np.ndarray) -> float:
    """Clenshaw-Curtis approximation of int_a^b f dx from nodal samples."""
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.n + 1,):
        raise ValueError(f"field has shape {f.shape}, expected {(grid.n + 1,)}")
    return float(np.dot(grid.quad_weights, f))


def horizon_indices(grid: Grid, h: int, delta: float) -> np.ndarray:
    """Node indices j with 0 < |x_h - x_j| <= delta (self excluded)."""
    if not 0 <= h <= grid.n:
        raise ValueError(f"node index {h} out of range 0..{grid.n}")
    if delta <= 0:
        raise ValueError(f"horizon must be positive, got {delta}")
    dist = np.abs(grid.nodes_phys - grid.nodes_phys[h])
    mask = (dist > 0.0) & (dist <= delta)
    mask[h] = False
    return np.nonzero(mask)[0]


def barycentric_weights(n: int) -> np.ndarray:
    """Barycentric interpolation weights for CGL nodes (up to scaling)."""
    w = np.ones(n + 1)
    w[1::2] = -1.0
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def barycentric_interpolate(grid: Grid, f: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Evaluate the degree-n interpolant of nodal values f at points x.

    Stable barycentric form with the closed-form CGL weights; points that
    coincide with a node return the nodal value exactly.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.n + 1,):
        raise ValueError(f"field has shape {f.shape}, expected {(grid.n + 1,)}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    w = barycentric_weights(grid.n)
    diff = x[:, None] - grid.nodes_phys[None, :]
    exact = diff == 0.0
    hit_rows = exact.any(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = w[None, :] / diff
        out = (ratio @ f) / ratio.sum(axis=1)
    if hit_rows.any():
        rows, cols = np.nonzero(exact)
        out[rows] = f[cols]
    return out
