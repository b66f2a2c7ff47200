"""Stoermer-Verlet time stepping with Neumann enforcement at every level.

The scheme is the two-stage update

    u^{s+1} = u^s + dt (v^s + dt/2 f(u^s))
    v^{s+1} = v^s + dt/2 (f(u^s) + f(u^{s+1}))

with f the configured acceleration field. After the u update the boundary
values are overwritten by the 2x2 derivative-matrix solve so the discrete
Neumann condition holds exactly; the same solve is applied to v (the time
derivative of the boundary condition, which the source material leaves
unspecified). Divergence is checked every step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DivergenceError
from .grid import Grid


@dataclass(frozen=True)
class State:
    """Trajectory sample: displacement u, velocity v at time t = step * dt."""

    u: np.ndarray
    v: np.ndarray
    t: float
    step: int = 0


class BcSolver:
    """Boundary completion from the first and last derivative-matrix rows.

    Solves the residual form of the 2x2 system: corrections to u_0 and u_N
    that zero the boundary derivatives, given the interior values.
    """

    def __init__(self, grid: Grid):
        d = grid.deriv_matrix
        self.row0 = d[0].copy()
        self.rowN = d[-1].copy()
        a, b = d[0, 0], d[0, -1]
        c, e = d[-1, 0], d[-1, -1]
        det = a * e - b * c
        scale = max(abs(a), abs(b), abs(c), abs(e))
        if abs(det) <= 1e-14 * scale**2:
            raise ConfigurationError("boundary 2x2 system is singular")
        self.inv = np.array([[e, -b], [-c, a]]) / det

    def enforce(self, u: np.ndarray) -> np.ndarray:
        """Return u with boundary entries completing a zero-slope interpolant."""
        r0 = self.row0 @ u
        rN = self.rowN @ u
        du = self.inv @ np.array([-r0, -rN])
        out = u.copy()
        out[0] += du[0]
        out[-1] += du[1]
        return out

    def residual(self, u: np.ndarray) -> float:
        """max(|(Du)_0|, |(Du)_N|)."""
        return max(abs(self.row0 @ u), abs(self.rowN @ u))


def enforce_bc(bc: BcSolver, u: np.ndarray) -> np.ndarray:
    return bc.enforce(u)


def _check_finite(u: np.ndarray, v: np.ndarray, step: int, t: float):
    if not (np.isfinite(u).all() and np.isfinite(v).all()):
        raise DivergenceError(step, t)


def step(rhs, bc: BcSolver | None, s: State, dt: float) -> State:
    """One Stoermer-Verlet step of size dt (negative dt steps backwards)."""
    if dt == 0.0:
        raise ConfigurationError("time step must be nonzero")
    a0 = rhs(s.u)
    u1 = s.u + dt * (s.v + 0.5 * dt * a0)
    if bc is not None:
        u1 = bc.enforce(u1)
    a1 = rhs(u1)
    v1 = s.v + 0.5 * dt * (a0 + a1)
    if bc is not None:
        v1 = bc.enforce(v1)
    _check_finite(u1, v1, s.step + 1, s.t + dt)
    return State(u=u1, v=v1, t=s.t + dt, step=s.step + 1)


def evolve(rhs, bc: BcSolver | None, s0: State, dt: float, n_steps: int, observers=()) -> State:
    """Advance n_steps from s0, notifying observers at every step.

    Observers are callables (step, t, u, v) receiving read-only views; they
    are invoked once for the initial state and after every step. The s-stage
    acceleration is reused across steps, so each step costs two rhs
    evaluations as in the two-stage scheme.
    """
    if n_steps < 0:
        raise ConfigurationError(f"n_steps must be >= 0, got {n_steps}")
    u, v = s0.u.copy(), s0.v.copy()
    t0, step0 = s0.t, s0.step
    _notify(observers, step0, t0, u, v)
    if n_steps == 0:
        return State(u=u, v=v, t=t0, step=step0)
    acc = rhs(u)
    for k in range(1, n_steps + 1):
        u = u + dt * (v + 0.5 * dt * acc)
        if bc is not None:
            u = bc.enforce(u)
        acc_new = rhs(u)
        v = v + 0.5 * dt * (acc + acc_new)
        if bc is not None:
            v = bc.enforce(v)
        acc = acc_new
        t = t0 + k * dt
        _check_finite(u, v, step0 + k, t)
        _notify(observers, step0 + k, t, u, v)
    return State(u=u, v=v, t=t0 + n_steps * dt, step=step0 + n_steps)


def _notify(observers, step_idx: int, t: float, u: np.ndarray, v: np.ndarray):
    if not observers:
        return
    uv, vv = u.view(), v.view()
    uv.flags.writeable = False
    vv.flags.writeable = False
    for obs in observers:
        obs(step_idx, t, uv, vv)


def strided(stride: int, fn):
    """Wrap an observer so it fires every stride-th step (and step 0)."""
    if stride < 1:
        raise ConfigurationError(f"stride must be >= 1, got {stride}")

    def wrapper(step_idx, t, u, v):
        if step_idx % stride == 0:
            fn(step_idx, t, u, v)

    return wrapper
