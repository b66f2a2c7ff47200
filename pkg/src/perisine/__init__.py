"""Chebyshev collocation solver and experiment harness for the peridynamic
(nonlocal) sine-Gordon equation, with a finite-difference comparator,
an energy monitor, and convergence/validation drivers."""

from .analysis import EnergyBreakdown, ErrorReport, energy, fit_rate, relative_l2_error
from .dynamics import DynamicsSpec, rhs, sine_force
from .errors import ConfigurationError, DivergenceError
from .grid import Grid, build_grid, horizon_indices, integrate
from .integrator import BcSolver, State, enforce_bc, evolve, step
from .kernel import (
    KernelSpec,
    KernelTable,
    apply_L_quadrature,
    apply_L_spectral,
    build_kernel_table,
    compute_beta,
    kernel_value,
)
from .reference import FdGrid, build_fd_grid, fd_apply_L, fd_evolve
from .scenarios import ScenarioSpec, exact_classical_kink, initial_condition

__version__ = "0.1.0"

__all__ = [
    "BcSolver",
    "ConfigurationError",
    "DivergenceError",
    "DynamicsSpec",
    "EnergyBreakdown",
    "ErrorReport",
    "FdGrid",
    "Grid",
    "KernelSpec",
    "KernelTable",
    "ScenarioSpec",
    "State",
    "apply_L_quadrature",
    "apply_L_spectral",
    "build_fd_grid",
    "build_grid",
    "build_kernel_table",
    "compute_beta",
    "energy",
    "enforce_bc",
    "evolve",
    "exact_classical_kink",
    "fd_apply_L",
    "fd_evolve",
    "fit_rate",
    "horizon_indices",
    "initial_condition",
    "integrate",
    "kernel_value",
    "relative_l2_error",
    "rhs",
    "sine_force",
    "step",
]
