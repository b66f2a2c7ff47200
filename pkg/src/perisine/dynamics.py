"""Right-hand sides for the nonlocal and classical sine-Gordon systems."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .grid import Grid
from .kernel import KernelSpec, KernelTable, apply_L_quadrature, apply_L_spectral

MODELS = ("nonlocal-quadrature", "nonlocal-spectral", "classical-local")


@dataclass(frozen=True)
class DynamicsSpec:
    """Which second-order system to integrate.

    model selects the operator realization; kernel is required for the
    nonlocal models, wave_speed for the classical one. sign picks the
    operator sign convention (see kernel.sign_factor).
    """

    model: str
    kernel: KernelSpec | None = None
    wave_speed: float | None = None
    sign: str = "diffusive"

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigurationError(f"unknown model {self.model!r}, expected one of {MODELS}")
        if self.model == "classical-local":
            if self.wave_speed is None or self.wave_speed <= 0:
                raise ConfigurationError("classical-local model needs wave_speed > 0")
        elif self.kernel is None:
            raise ConfigurationError(f"model {self.model!r} needs a kernel spec")


def sine_force(u: np.ndarray) -> np.ndarray:
    """Elementwise sin(u)."""
    return np.sin(u)


def make_rhs(spec: DynamicsSpec, grid: Grid, table: KernelTable | None):
    """Compiled rhs callable u -> L u - sin u for repeated evaluation."""
    if spec.model == "classical-local":
        d2 = spec.wave_speed**2 * (grid.deriv_matrix @ grid.deriv_matrix)
        return lambda u: d2 @ u - np.sin(u)
    if table is None:
        raise ConfigurationError(f"model {spec.model!r} needs a kernel table")
    if spec.model == "nonlocal-quadrature":
        return lambda u: apply_L_quadrature(table, grid, u, spec.sign) - np.sin(u)
    return lambda u: apply_L_spectral(table, grid, u, spec.sign) - np.sin(u)


def rhs(spec: DynamicsSpec, grid: Grid, table: KernelTable | None, u: np.ndarray) -> np.ndarray:
    """One-shot evaluation of the acceleration field at nodal values u."""
    return make_rhs(spec, grid, table)(u)
