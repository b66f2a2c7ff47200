"""Peridynamic kernel, horizon quadrature and the nonlocal operator L.

The kernel is k(r) = |r|^(-(1+2*alpha)) restricted to cutoff <= |r| <= delta.
The operator is applied either by direct quadrature over the clipped horizon
(production path) or through the coefficient-product convolution of the
Chebyshev transforms (literal frequency-space path, kept for benchmarking).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import transform
from .errors import ConfigurationError
from .grid import Grid

SIGN_CONVENTIONS = ("diffusive", "as-printed")


def sign_factor(convention: str) -> float:
    """+1 for the diffusive convention (L u ~ +C u_xx), -1 for as-printed."""
    if convention == "diffusive":
        return 1.0
    if convention == "as-printed":
        return -1.0
    raise ConfigurationError(
        f"unknown sign convention {convention!r}, expected one of {SIGN_CONVENTIONS}"
    )


@dataclass(frozen=True)
class KernelSpec:
    """Fractional kernel parameters: exponent alpha, horizon delta, cutoff."""

    alpha: float
    delta: float
    cutoff: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.delta <= 0.0:
            raise ConfigurationError(f"horizon delta must be positive, got {self.delta}")
        if not 0.0 <= self.cutoff < self.delta:
            raise ConfigurationError(
                f"cutoff must satisfy 0 <= cutoff < delta, got cutoff={self.cutoff}, delta={self.delta}"
            )


def kernel_value(spec: KernelSpec, r):
    """k(r): |r|^(-(1+2a)) inside [cutoff, delta], zero outside; r = 0 is illegal."""
    r = np.asarray(r, dtype=float)
    if np.any(r == 0.0):
        raise ValueError("kernel is undefined at r = 0: no self-interaction")
    a = np.abs(r)
    inside = (a >= spec.cutoff) & (a <= spec.delta)
    out = np.where(inside, a ** -(1.0 + 2.0 * spec.alpha), 0.0)
    return float(out) if out.ndim == 0 else out


def closed_form_beta(spec: KernelSpec) -> float:
    """(1/alpha) (cutoff^(-2a) - delta^(-2a)), the exact horizon integral."""
    if spec.cutoff <= 0.0:
        raise ValueError("divergent beta: the horizon integral needs cutoff > 0")
    a2 = 2.0 * spec.alpha
    return (spec.cutoff**-a2 - spec.delta**-a2) / spec.alpha


def compute_beta(spec: KernelSpec, grid: Grid | None = None, n_panels: int | None = None) -> float:
    """Quadrature approximation of beta = 2 * int_cutoff^delta k(s) ds.

    Composite trapezoid after the substitution s = cutoff * e^y, which makes
    the integrand smooth and bounded; refining n_panels converges O(h^2) to
    the closed-form antiderivative. Default resolution scales with the grid.
    """
    if spec.cutoff <= 0.0:
        raise ValueError("divergent beta: the horizon integral needs cutoff > 0")
    if n_panels is None:
        n_panels = 4096 if grid is None else max(4096, 8 * (grid.n + 1))
    y_top = np.log(spec.delta / spec.cutoff)
    y = np.linspace(0.0, y_top, n_panels + 1)
    integrand = spec.cutoff ** (-2.0 * spec.alpha) * np.exp(-2.0 * spec.alpha * y)
    return float(2.0 * np.trapz(integrand, y))


def effective_stiffness(spec: KernelSpec) -> float:
    """Coefficient M with L u ~ M u'' for smooth u under the diffusive sign.

    M = int_cutoff^delta s^2 k(s) ds = (delta^(2-2a) - cutoff^(2-2a)) / (2-2a).
    """
    p = 2.0 - 2.0 * spec.alpha
    return (spec.delta**p - spec.cutoff**p) / p


def _kernel_moments(spec: KernelSpec, lo: float, hi: float) -> tuple[float, float]:
    """Exact (m0, m1) = (int k, int s k) over the subinterval [lo, hi]."""
    a2 = 2.0 * spec.alpha
    m0 = (lo**-a2 - hi**-a2) / a2
    if spec.alpha == 0.5:
        m1 = np.log(hi / lo)
    else:
        p = 1.0 - a2
        m1 = (hi**p - lo**p) / p
    return m0, m1


def _trapezoid_pair_matrix(spec: KernelSpec, grid: Grid) -> np.ndarray:
    """Pair weights tw_j * k(|x_h - x_j|) on the clipped horizon."""
    x = grid.nodes_phys
    tw = grid.trapezoid_weights()
    dist = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(dist, np.inf)  # self never interacts
    inside = (dist >= spec.cutoff) & (dist <= spec.delta)
    kv = np.where(inside, dist ** -(1.0 + 2.0 * spec.alpha), 0.0)
    return kv * tw[None, :]


def _weighted_pair_row(spec: KernelSpec, x: np.ndarray, h: int) -> dict[int, float]:
    """Kernel-weighted panel quadrature weights for one node.

    Integrates k(s) times the piecewise-linear interpolant of the
    displacement difference over the clipped horizon, using the exact
    kernel moments on each panel. The self node enters only through the
    exact anchor g(0) = 0, so the returned weights multiply u_j - u_h.
    """
    weights: dict[int, float] = {}
    n = x.size - 1
    for direction in (-1, 1):  # -1 walks towards larger x (smaller index)
        idx = np.arange(h - 1, -1, -1) if direction == -1 else np.arange(h + 1, n + 1)
        if idx.size == 0:
            continue
        s = np.abs(x[idx] - x[h])  # strictly increasing offsets
        # panel k spans [s_{k-1}, s_k], anchored at g(0) = 0 for k = 0;
        # the panel straddling delta keeps its outer node with a clipped weight,
        # and integration is censored at the last in-domain node.
        for k in range(s.size):
            left = 0.0 if k == 0 else float(s[k - 1])
            if left >= spec.delta:
                break
            right = float(s[k])
            lo = max(left, spec.cutoff)
            hi = min(right, spec.delta)
            if hi <= lo:
                continue
            width = right - left
            if k == 0:
                # g(left) = 0 exactly; only the right-node coefficient survives
                _, m1 = _kernel_moments(spec, lo, hi)
                j = int(idx[0])
                weights[j] = weights.get(j, 0.0) + m1 / width
            else:
                m0, m1 = _kernel_moments(spec, lo, hi)
                j_left, j_right = int(idx[k - 1]), int(idx[k])
                weights[j_left] = weights.get(j_left, 0.0) + (right * m0 - m1) / width
                weights[j_right] = weights.get(j_right, 0.0) + (m1 - left * m0) / width
    return weights


def _weighted_pair_matrix(spec: KernelSpec, grid: Grid) -> np.ndarray:
    x = grid.nodes_phys
    n = grid.n
    w = np.zeros((n + 1, n + 1))
    for h in range(n + 1):
        for j, val in _weighted_pair_row(spec, x, h).items():
            w[h, j] = val
    return w


QUADRATURES = ("trapezoid", "kernel-weighted")


@dataclass(frozen=True, eq=False)
class KernelTable:
    """Precomputed pairwise data for applying L on a fixed grid.

    weights[h, j] holds the quadrature-weight x kernel-value product for the
    neighbor pair (h, j); zero entries mark excluded pairs. node_weights are
    the global trapezoid weights reused by the energy double sum. The
    kernel coefficients are normalized so their zeroth mode equals beta,
    which makes the frequency-space path annihilate constant fields with
    the same quadrature convention as beta itself.
    """

    spec: KernelSpec
    beta: float
    weights: np.ndarray
    row_sums: np.ndarray = field(repr=False)
    node_weights: np.ndarray = field(repr=False)
    kernel_coeffs: np.ndarray = field(repr=False)
    quadrature: str = "trapezoid"
    scale: float = 1.0

    def pairs(self, h: int):
        """(neighbor indices, pair weights) for node h."""
        j = np.nonzero(self.weights[h])[0]
        return j, self.weights[h, j]


def build_kernel_table(
    spec: KernelSpec,
    grid: Grid,
    quadrature: str = "trapezoid",
    scale: float = 1.0,
) -> KernelTable:
    """Assemble the pairwise table, beta and the sampled-kernel coefficients.

    scale multiplies the whole operator (pair weights, beta and kernel
    coefficients alike); the experiment layer uses 1/effective_stiffness to
    normalize the long-wave speed to one where a sweep needs it.
    """
    if quadrature not in QUADRATURES:
        raise ConfigurationError(
            f"unknown quadrature {quadrature!r}, expected one of {QUADRATURES}"
        )
    if spec.cutoff <= 0.0:
        raise ConfigurationError(
            "kernel table needs cutoff > 0 (beta diverges otherwise); "
            "use the grid min-spacing policy or set an explicit cutoff"
        )
    if quadrature == "trapezoid":
        weights = _trapezoid_pair_matrix(spec, grid)
    else:
        weights = _weighted_pair_matrix(spec, grid)
    beta = compute_beta(spec, grid)

    center = 0.5 * (grid.a + grid.b)
    dist = np.abs(grid.nodes_phys - center)
    inside = (dist >= spec.cutoff) & (dist <= spec.delta)
    with np.errstate(divide="ignore"):
        samples = np.where(inside, dist ** -(1.0 + 2.0 * spec.alpha), 0.0)
    coeffs = transform.forward(samples)
    if coeffs[0] > 0.0:
        coeffs = coeffs * (beta / coeffs[0])

    weights = weights * scale
    beta = beta * scale
    coeffs = coeffs * scale
    return KernelTable(
        spec=spec,
        beta=beta,
        weights=weights,
        row_sums=weights.sum(axis=1),
        node_weights=grid.trapezoid_weights(),
        kernel_coeffs=coeffs,
        quadrature=quadrature,
        scale=scale,
    )


def _check_field(table: KernelTable, u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (table.weights.shape[0],):
        raise ValueError(f"field has shape {u.shape}, expected {(table.weights.shape[0],)}")
    return u


def apply_L_quadrature(table: KernelTable, grid: Grid, u: np.ndarray, sign: str = "diffusive") -> np.ndarray:
    """sigma * sum_j w_hj (u_j - u_h): the horizon-quadrature operator."""
    u = _check_field(table, u)
    sigma = sign_factor(sign)
    return sigma * (table.weights @ u - table.row_sums * u)


def apply_L_spectral(table: KernelTable, grid: Grid, u: np.ndarray, sign: str = "diffusive") -> np.ndarray:
    """sigma * ((k conv u) - beta u) via coefficient products (benchmark path)."""
    u = _check_field(table, u)
    sigma = sign_factor(sign)
    conv = transform.coeff_product_convolve(table.kernel_coeffs, transform.forward(u))
    return sigma * (conv - table.beta * u)
