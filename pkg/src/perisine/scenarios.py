"""Closed-form initial conditions for the experiment scenarios.

All formulas are evaluated in overflow-safe forms (sech through decaying
exponentials, 4*atan(e^z) through its z -> -z identity) so wide domains and
velocities close to 1 stay finite.

The breather velocity formula is printed with unbalanced parentheses in the
source; the grouping used here (w*cos(.)*cosh(.) + c*sqrt(1-w^2)*sin(.)*sinh(.)
over the usual denominator) is the one that matches the time derivative of
the travelling breather solution, which the test suite checks by finite
differences of exact_classical_breather.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .grid import Grid

SCENARIO_NAMES = (
    "flat-impulse",
    "kink",
    "antikink",
    "kink-kink",
    "kink-antikink",
    "breather",
    "gaussian",
)


@dataclass(frozen=True)
class ScenarioSpec:
    """Named initial-condition family with its parameters."""

    name: str
    c: float = 0.999
    w: float = 0.4
    amplitude: float = 1.0
    width: float = 0.002

    def __post_init__(self):
        if self.name not in SCENARIO_NAMES:
            raise ConfigurationError(
                f"unknown scenario {self.name!r}, expected one of {SCENARIO_NAMES}"
            )
        if self.name != "gaussian" and not abs(self.c) < 1.0:
            raise ConfigurationError(f"velocity must satisfy |c| < 1, got c={self.c}")
        if self.name == "breather" and not 0.0 < self.w < 1.0:
            raise ConfigurationError(f"breather frequency must lie in (0, 1), got w={self.w}")
        if self.name == "gaussian" and self.width <= 0.0:
            raise ConfigurationError(f"gaussian width must be positive, got {self.width}")


def _sech(z):
    """2 e^{-|z|} / (1 + e^{-2|z|}): never overflows, underflows to zero."""
    z = np.abs(np.asarray(z, dtype=float))
    e = np.exp(-z)
    return 2.0 * e / (1.0 + e * e)


def _atan4_exp(z):
    """4*atan(e^z) without overflow: 2*pi - 4*atan(e^-z) for z > 0."""
    z = np.asarray(z, dtype=float)
    pos = z > 0
    out = np.empty_like(z)
    out[~pos] = 4.0 * np.arctan(np.exp(z[~pos]))
    out[pos] = 2.0 * np.pi - 4.0 * np.arctan(np.exp(-z[pos]))
    return out


def _atan4_sinh(c, z):
    """4*atan(c*sinh(z)), evaluated through tanh to stay bounded."""
    z = np.asarray(z, dtype=float)
    # sinh z = tanh z / sech z; split at |z| where sech underflows
    small = np.abs(z) < 350.0
    out = np.empty_like(z)
    out[small] = 4.0 * np.arctan(c * np.sinh(z[small]))
    out[~small] = np.sign(z[~small]) * 2.0 * np.pi
    return out


def initial_condition(spec: ScenarioSpec, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """Sample (u0, v0) of the named scenario at the grid's physical nodes."""
    return initial_condition_at(spec, grid.nodes_phys)


def initial_condition_at(spec: ScenarioSpec, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sample (u0, v0) of the named scenario at arbitrary positions x."""
    x = np.asarray(x, dtype=float)
    c = spec.c
    if spec.name == "gaussian":
        u0 = spec.amplitude * np.exp(-(x**2) / spec.width)
        return u0, np.zeros_like(x)

    gamma = np.sqrt(1.0 - c * c)
    if spec.name in ("flat-impulse", "kink-antikink"):
        u0 = np.zeros_like(x)
        v0 = 4.0 / gamma * _sech(x / gamma)
        return u0, v0
    if spec.name == "kink":
        u0 = _atan4_exp(x / gamma)
        v0 = -2.0 * c / gamma * _sech(x / gamma)
        return u0, v0
    if spec.name == "antikink":
        u0 = _atan4_exp(-x / gamma)
        v0 = -2.0 * c / gamma * _sech(x / gamma)
        return u0, v0
    if spec.name == "kink-kink":
        u0 = _atan4_sinh(c, x / gamma)
        return u0, np.zeros_like(x)

    # breather
    w = spec.w
    q = np.sqrt(1.0 - w * w)
    phase = -c * w * x / gamma
    envelope = q * x / gamma
    sech_env = _sech(envelope)
    tanh_env = np.tanh(envelope)
    u0 = 4.0 * np.arctan(q / w * np.sin(phase) * sech_env)
    denom = w * w + (1.0 - w * w) * np.sin(phase) ** 2 * sech_env**2
    numer = w * np.cos(phase) + c * q * np.sin(phase) * tanh_env
    v0 = 4.0 * w * q / gamma * numer * sech_env / denom
    return u0, v0


def exact_classical_kink(c: float, x, t: float):
    """Travelling kink 4*atan(exp((x - c t)/sqrt(1-c^2))) of the local model."""
    if not abs(c) < 1.0:
        raise ConfigurationError(f"velocity must satisfy |c| < 1, got c={c}")
    gamma = np.sqrt(1.0 - c * c)
    return _atan4_exp((np.asarray(x, dtype=float) - c * t) / gamma)


def exact_classical_breather(c: float, w: float, x, t: float):
    """Travelling breather of the local model (oracle for the breather ICs)."""
    if not abs(c) < 1.0:
        raise ConfigurationError(f"velocity must satisfy |c| < 1, got c={c}")
    if not 0.0 < w < 1.0:
        raise ConfigurationError(f"breather frequency must lie in (0, 1), got w={w}")
    x = np.asarray(x, dtype=float)
    gamma = np.sqrt(1.0 - c * c)
    q = np.sqrt(1.0 - w * w)
    phase = w * (t - c * x) / gamma
    envelope = q * (x - c * t) / gamma
    return 4.0 * np.arctan(q / w * np.sin(phase) * _sech(envelope))
