"""Energy functional, relative errors and convergence-rate fitting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .grid import Grid, integrate
from .kernel import KernelTable


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy components; both total conventions are always reported.

    total_printed = kinetic - nonlocal - potential (the sign pattern of the
    source energy functional); total_hamiltonian = kinetic + nonlocal +
    potential, the quantity conserved by the diffusive-sign dynamics.
    """

    kinetic: float
    nonlocal_: float
    potential: float
    total_printed: float
    total_hamiltonian: float


def energy(grid: Grid, table: KernelTable, u: np.ndarray, v: np.ndarray,
           node_quadrature: str = "clenshaw-curtis") -> EnergyBreakdown:
    """Evaluate the energy functional of a state.

    kinetic = 1/2 int v^2, potential = int (1 - cos u), via Clenshaw-Curtis
    by default; node_quadrature="trapezoid" instead uses the same node
    weights as the pairwise table, which makes the total the exact discrete
    Hamiltonian of the quadrature-path flow. The nonlocal term is the double
    sum over the operator's own pair weights in either case, so its
    cancellation structure matches the operator.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.shape != (grid.n + 1,):
        raise ValueError(f"fields must have shape {(grid.n + 1,)}, got {u.shape} and {v.shape}")
    if node_quadrature == "clenshaw-curtis":
        nw = grid.quad_weights
    elif node_quadrature == "trapezoid":
        nw = table.node_weights
    else:
        raise ConfigurationError(f"unknown node quadrature {node_quadrature!r}")
    kinetic = 0.5 * float(nw @ v**2)
    potential = float(nw @ (1.0 - np.cos(u)))
    # sum_j w_hj (u_h - u_j)^2 = u_h^2 rs_h - 2 u_h (W u)_h + (W u^2)_h
    pair_sq = u**2 * table.row_sums - 2.0 * u * (table.weights @ u) + table.weights @ u**2
    nonlocal_ = 0.25 * float(table.node_weights @ pair_sq)
    return EnergyBreakdown(
        kinetic=kinetic,
        nonlocal_=nonlocal_,
        potential=potential,
        total_printed=kinetic - nonlocal_ - potential,
        total_hamiltonian=kinetic + nonlocal_ + potential,
    )


def relative_l2_error(u: np.ndarray, u_ref: np.ndarray) -> float:
    """sum_{h=1..N} |u_h - u*_h|^2 / sum_{h=1..N} |u*_h|^2 (squared-ratio form).

    The sums run over node indices 1..N, exactly as the source defines the
    error; both fields must live on the same node set.
    """
    u = np.asarray(u, dtype=float)
    u_ref = np.asarray(u_ref, dtype=float)
    if u.shape != u_ref.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {u_ref.shape}")
    num = float(np.sum((u[1:] - u_ref[1:]) ** 2))
    den = float(np.sum(u_ref[1:] ** 2))
    if den == 0.0:
        raise ValueError("reference field has zero norm on the summed nodes")
    return num / den


def relative_rms_error(u: np.ndarray, u_ref: np.ndarray) -> float:
    """Square-rooted variant of relative_l2_error, for cross-convention reads."""
    return float(np.sqrt(relative_l2_error(u, u_ref)))


@dataclass(frozen=True)
class ErrorReport:
    """Per-resolution errors with pairwise and fitted rates."""

    resolutions: tuple
    errors: tuple
    pairwise_rates: tuple
    fitted_rate: float
    fit_residual: float


def pairwise_rates(resolutions, errors) -> tuple:
    """Two-point rates log(e1/e2)/log(N2/N1) for consecutive resolutions."""
    out = []
    for (n1, e1), (n2, e2) in zip(zip(resolutions, errors), zip(resolutions[1:], errors[1:])):
        out.append(float(np.log(e1 / e2) / np.log(n2 / n1)))
    return tuple(out)


def fit_rate(pairs) -> float:
    """Least-squares slope of log(error) vs log(N), negated: error ~ N^-rate."""
    return make_error_report(pairs).fitted_rate


def make_error_report(pairs) -> ErrorReport:
    pairs = list(pairs)
    if len(pairs) < 2:
        raise ConfigurationError("rate fitting needs at least two (resolution, error) pairs")
    ns = np.array([float(p[0]) for p in pairs])
    es = np.array([float(p[1]) for p in pairs])
    if np.any(ns <= 0) or np.any(es <= 0):
        raise ConfigurationError("resolutions and errors must be positive for log-log fitting")
    logn, loge = np.log(ns), np.log(es)
    coeffs, res, *_ = np.polyfit(logn, loge, 1, full=True)
    residual = float(res[0]) if len(res) else 0.0
    return ErrorReport(
        resolutions=tuple(int(n) for n in ns),
        errors=tuple(float(e) for e in es),
        pairwise_rates=pairwise_rates(ns, es),
        fitted_rate=float(-coeffs[0]),
        fit_residual=residual,
    )
