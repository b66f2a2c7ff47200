"""Discrete Chebyshev transform between nodal values and coefficients.

The forward map is c_n = (1/gamma_n) * sum_h f(x_h) T_n(x_h) w_h with
gamma_0 = gamma_N = pi, gamma_n = pi/2 otherwise, and node weights
w_0 = w_N = pi/(2N), w_h = pi/N otherwise. On CGL nodes this reduces to a
scaled type-I cosine transform, which is the fast path; the direct O(N^2)
sums are kept as oracles.
"""

from __future__ import annotations

import numpy as np
from scipy.fft import dct


def _check_length(f: np.ndarray) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.ndim != 1 or f.size < 2:
        raise ValueError(f"expected a 1-d nodal array with >= 2 entries, got shape {f.shape}")
    return f


def forward(f: np.ndarray) -> np.ndarray:
    """Chebyshev coefficients of nodal samples f (fast cosine transform)."""
    f = _check_length(f)
    n = f.size - 1
    c = dct(f, type=1) / n
    c[0] *= 0.5
    c[-1] *= 0.5
    return c


def inverse(c: np.ndarray) -> np.ndarray:
    """Nodal values sum_n c_n T_n(x_h) on the CGL nodes (fast path)."""
    c = _check_length(c)
    g = c.copy()
    g[0] *= 2.0
    g[-1] *= 2.0
    return dct(g, type=1) / 2.0


def coeff_product_convolve(kc: np.ndarray, uc: np.ndarray) -> np.ndarray:
    """Nodal field of the coefficient-wise product of two transforms.

    Realizes the product-in-frequency-space reading of a convolution for
    Chebyshev coefficients. Whether this coincides with the physical
    horizon integral is an empirical question handled by the validation
    harness; this routine is the literal product construction.
    """
    kc = _check_length(kc)
    uc = _check_length(uc)
    if kc.shape != uc.shape:
        raise ValueError(f"coefficient shapes differ: {kc.shape} vs {uc.shape}")
    return inverse(kc * uc)


def _transform_constants(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """cos-matrix T_n(x_h), node weights w_h and normalizers gamma_n."""
    h = np.arange(n + 1)
    cos_mat = np.cos(np.pi * np.outer(h, h) / n)
    w = np.full(n + 1, np.pi / n)
    w[0] = w[-1] = np.pi / (2 * n)
    gamma = np.full(n + 1, np.pi / 2)
    gamma[0] = gamma[-1] = np.pi
    return cos_mat, w, gamma


def forward_direct(f: np.ndarray) -> np.ndarray:
    """Direct O(N^2) evaluation of the forward transform (test oracle)."""
    f = _check_length(f)
    cos_mat, w, gamma = _transform_constants(f.size - 1)
    return (cos_mat @ (f * w)) / gamma


def inverse_direct(c: np.ndarray) -> np.ndarray:
    """Direct O(N^2) evaluation of the inverse transform (test oracle)."""
    c = _check_length(c)
    cos_mat, _, _ = _transform_constants(c.size - 1)
    return cos_mat @ c
