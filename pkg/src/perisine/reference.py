"""Finite-difference comparator: uniform grid, trapezoidal horizon sums,
explicit centered (leapfrog) time stepping.

This solver exists to validate the collocation solver and to build the
high-resolution reference for convergence tables; it is deliberately plain.
The nonlocal operator is censored at the domain edges (no ghost values);
the classical variant uses mirror ghosts for the three-point Laplacian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DivergenceError
from .kernel import KernelSpec, kernel_value, sign_factor


@dataclass(frozen=True, eq=False)
class FdGrid:
    """Uniform grid with m intervals on [a, b]."""

    m: int
    a: float
    b: float
    spacing: float
    nodes: np.ndarray


def build_fd_grid(m: int, a: float, b: float) -> FdGrid:
    if m < 2:
        raise ConfigurationError(f"fd grid needs m >= 2 intervals, got {m}")
    if not b > a:
        raise ConfigurationError(f"degenerate interval: a={a} must be < b={b}")
    return FdGrid(m=m, a=float(a), b=float(b), spacing=(b - a) / m,
                  nodes=np.linspace(a, b, m + 1))


def _offset_kernel(gridf: FdGrid, spec: KernelSpec):
    """Offsets o and kernel values k(o*h) with support inside the horizon.

    Offsets are evaluated as o * spacing (not node differences) so the
    cutoff/horizon window is applied consistently for every node pair.
    """
    hx = gridf.spacing
    o_max = int(np.floor(spec.delta / hx + 1e-12))
    offsets, kvals = [], []
    for o in range(1, o_max + 1):
        r = o * hx
        if r < spec.cutoff or r > spec.delta:
            continue
        offsets.append(o)
        kvals.append(kernel_value(spec, r))
    return offsets, kvals


def _trapezoid_node_weights(gridf: FdGrid) -> np.ndarray:
    tw = np.full(gridf.m + 1, gridf.spacing)
    tw[0] *= 0.5
    tw[-1] *= 0.5
    return tw


def fd_apply_L(gridf: FdGrid, spec: KernelSpec, u: np.ndarray, sign: str = "diffusive") -> np.ndarray:
    """Trapezoidal-rule nonlocal operator on the uniform grid."""
    u = np.asarray(u, dtype=float)
    if u.shape != (gridf.m + 1,):
        raise ValueError(f"field has shape {u.shape}, expected {(gridf.m + 1,)}")
    tw = _trapezoid_node_weights(gridf)
    out = np.zeros_like(u)
    for o, kv in zip(*_offset_kernel(gridf, spec)):
        out[:-o] += tw[o:] * kv * (u[o:] - u[:-o])
        out[o:] += tw[:-o] * kv * (u[:-o] - u[o:])
    return sign_factor(sign) * out


def _classical_laplacian(u: np.ndarray, hx: float) -> np.ndarray:
    """Three-point u_xx with mirror ghosts (homogeneous Neumann ends)."""
    lap = np.empty_like(u)
    lap[1:-1] = (u[:-2] - 2.0 * u[1:-1] + u[2:]) / hx**2
    lap[0] = 2.0 * (u[1] - u[0]) / hx**2
    lap[-1] = 2.0 * (u[-2] - u[-1]) / hx**2
    return lap


def fd_evolve(
    gridf: FdGrid,
    spec: KernelSpec | None,
    u0: np.ndarray,
    v0: np.ndarray,
    dt: float,
    n_steps: int,
    sign: str = "diffusive",
    model: str = "nonlocal",
    wave_speed: float | None = None,
    observer=None,
) -> np.ndarray:
    """Leapfrog evolution; returns the displacement field at t = n_steps*dt.

    Bootstrap: u^1 = u^0 + dt v^0 + dt^2/2 f(u^0); thereafter
    u^{s+1} = 2 u^s - u^{s-1} + dt^2 f(u^s).
    """
    if dt <= 0:
        raise ConfigurationError(f"time step must be positive, got {dt}")
    if n_steps < 0:
        raise ConfigurationError(f"n_steps must be >= 0, got {n_steps}")
    u0 = np.asarray(u0, dtype=float)
    v0 = np.asarray(v0, dtype=float)

    if model == "nonlocal":
        if spec is None:
            raise ConfigurationError("nonlocal fd model needs a kernel spec")
        tw = _trapezoid_node_weights(gridf)
        pairs = list(zip(*_offset_kernel(gridf, spec)))
        sigma = sign_factor(sign)

        def f(u):
            out = np.zeros_like(u)
            for o, kv in pairs:
                out[:-o] += tw[o:] * kv * (u[o:] - u[:-o])
                out[o:] += tw[:-o] * kv * (u[:-o] - u[o:])
            return sigma * out - np.sin(u)

    elif model == "classical":
        if wave_speed is None or wave_speed <= 0:
            raise ConfigurationError("classical fd model needs wave_speed > 0")
        c2 = wave_speed**2
        hx = gridf.spacing

        def f(u):
            return c2 * _classical_laplacian(u, hx) - np.sin(u)

    else:
        raise ConfigurationError(f"unknown fd model {model!r}")

    if observer is not None:
        observer(0, 0.0, u0, v0)
    if n_steps == 0:
        return u0.copy()

    u_prev = u0
    u_cur = u0 + dt * v0 + 0.5 * dt**2 * f(u0)
    if not np.isfinite(u_cur).all():
        raise DivergenceError(1, dt)
    if observer is not None:
        observer(1, dt, u_cur, (u_cur - u_prev) / dt)
    for s in range(1, n_steps):
        u_next = 2.0 * u_cur - u_prev + dt**2 * f(u_cur)
        u_prev, u_cur = u_cur, u_next
        if not np.isfinite(u_cur).all():
            raise DivergenceError(s + 1, (s + 1) * dt)
        if observer is not None:
            observer(s + 1, (s + 1) * dt, u_cur, (u_cur - u_prev) / dt)
    return u_cur
