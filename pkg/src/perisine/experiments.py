"""Experiment drivers behind the CLI subcommands.

Each driver takes a resolved RunConfig and an output directory, runs
deterministically, writes plain-text data files (and optional plots), and
returns a summary dict that the test suite asserts against directly.
"""

from __future__ import annotations

import os

import numpy as np

from . import plots
from .analysis import EnergyBreakdown, energy, make_error_report, relative_l2_error
from .config import RunConfig, serialize_config
from .dynamics import DynamicsSpec, make_rhs
from .errors import ConfigurationError
from .grid import Grid, barycentric_interpolate, build_grid
from .integrator import BcSolver, State, evolve, strided
from .kernel import KernelSpec, KernelTable, build_kernel_table, effective_stiffness
from .reference import build_fd_grid, fd_evolve
from .scenarios import initial_condition, initial_condition_at

SNAPSHOT_FORMAT = "perisine-snapshot-1"
SERIES_FORMAT = "perisine-series-1"


def _fmt(x: float) -> str:
    return f"{x:.17e}"


def _header(cfg: RunConfig, format_name: str, extra: dict | None = None) -> list[str]:
    lines = [f"# format = {format_name}"]
    for line in serialize_config(cfg.mapping).splitlines():
        lines.append(f"# config: {line}")
    for key, val in (extra or {}).items():
        lines.append(f"# {key} = {val}")
    return lines


def _write_lines(path: str, lines: list[str]):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_snapshot(path: str, cfg: RunConfig, x, u, v, step: int, t: float):
    lines = _header(cfg, SNAPSHOT_FORMAT, {"step": step, "t": _fmt(t), "columns": "x u v"})
    for xi, ui, vi in zip(x, u, v):
        lines.append(f"{_fmt(xi)} {_fmt(ui)} {_fmt(vi)}")
    _write_lines(path, lines)


def write_series(path: str, cfg: RunConfig, columns: str, rows):
    lines = _header(cfg, SERIES_FORMAT, {"columns": columns})
    for row in rows:
        lines.append(" ".join(_fmt(v) for v in row))
    _write_lines(path, lines)


class SnapshotWriter:
    """Observer writing one snapshot file per observed step."""

    def __init__(self, out_dir: str, cfg: RunConfig, grid: Grid, prefix: str = "snap"):
        self.out_dir = out_dir
        self.cfg = cfg
        self.grid = grid
        self.prefix = prefix
        self.written: set[int] = set()

    def __call__(self, step, t, u, v):
        if step in self.written:
            return
        self.written.add(step)
        path = os.path.join(self.out_dir, f"{self.prefix}_{step:06d}.dat")
        write_snapshot(path, self.cfg, self.grid.nodes_phys, u, v, step, t)


class EnergyMonitor:
    """Observer accumulating the energy breakdown time series."""

    def __init__(self, grid: Grid, table: KernelTable, node_quadrature: str = "clenshaw-curtis"):
        self.grid = grid
        self.table = table
        self.node_quadrature = node_quadrature
        self.rows: list[tuple] = []

    def __call__(self, step, t, u, v):
        e = energy(self.grid, self.table, u, v, node_quadrature=self.node_quadrature)
        self.rows.append((t, e.kinetic, e.nonlocal_, e.potential, e.total_printed, e.total_hamiltonian))

    def breakdowns(self) -> list[EnergyBreakdown]:
        return [EnergyBreakdown(k, nl, p, tp, th) for (_, k, nl, p, tp, th) in self.rows]


class FieldRecorder:
    """Observer keeping (t, u) samples in memory for paired comparisons."""

    def __init__(self):
        self.times: list[float] = []
        self.fields: list[np.ndarray] = []

    def __call__(self, step, t, u, v):
        self.times.append(t)
        self.fields.append(np.array(u))


class BoundaryResidualMonitor:
    def __init__(self, bc: BcSolver):
        self.bc = bc
        self.worst = 0.0

    def __call__(self, step, t, u, v):
        self.worst = max(self.worst, self.bc.residual(u), self.bc.residual(v))


def resolve_cutoff(cfg_cutoff: float | None, min_spacing: float) -> float:
    """Explicit cutoff, or the grid's minimal node spacing when auto."""
    return min_spacing if cfg_cutoff is None else cfg_cutoff


def kernel_spec_for(cfg: RunConfig, min_spacing: float, delta: float | None = None,
                    cutoff: float | None = None) -> KernelSpec:
    return KernelSpec(
        alpha=cfg.alpha,
        delta=cfg.delta if delta is None else delta,
        cutoff=resolve_cutoff(cfg.cutoff if cutoff is None else cutoff, min_spacing),
    )


def build_table_for(cfg: RunConfig, grid: Grid, delta: float | None = None,
                    quadrature: str | None = None, cutoff: float | None = None) -> KernelTable:
    spec = kernel_spec_for(cfg, grid.min_spacing(), delta, cutoff)
    scale = 1.0 / effective_stiffness(spec) if cfg.rescale_to_unit_speed else 1.0
    return build_kernel_table(spec, grid, quadrature=quadrature or cfg.quadrature, scale=scale)


def spectral_setup(cfg: RunConfig, n: int | None = None, model: str | None = None,
                   quadrature: str | None = None, cutoff: float | None = None,
                   delta: float | None = None):
    """Grid, kernel table (nonlocal only), rhs, bc and BC-consistent ICs."""
    grid = build_grid(cfg.n if n is None else n, cfg.a, cfg.b)
    model = model or cfg.model_kind
    table = None
    if model != "classical-local":
        table = build_table_for(cfg, grid, quadrature=quadrature, cutoff=cutoff, delta=delta)
    dyn = DynamicsSpec(
        model=model,
        kernel=table.spec if table is not None else None,
        wave_speed=cfg.wave_speed,
        sign=cfg.sign,
    )
    rhs = make_rhs(dyn, grid, table)
    bc = BcSolver(grid)
    u0, v0 = initial_condition(cfg.scenario, grid)
    u0 = bc.enforce(u0)
    v0 = bc.enforce(v0)
    return grid, table, rhs, bc, State(u=u0, v=v0, t=0.0)


def _say(quiet: bool, msg: str):
    if not quiet:
        print(msg, flush=True)


def cmd_run(cfg: RunConfig, out_dir: str, quiet: bool = False) -> dict:
    """Evolve one trajectory; write snapshots and the energy series."""
    os.makedirs(out_dir, exist_ok=True)
    grid, table, rhs, bc, s0 = spectral_setup(cfg)
    snaps = SnapshotWriter(out_dir, cfg, grid)
    observers = [strided(cfg.stride, snaps)]
    emon = None
    if table is not None:
        emon = EnergyMonitor(grid, table)
        observers.append(strided(cfg.stride, emon))
    bmon = BoundaryResidualMonitor(bc)
    observers.append(strided(cfg.stride, bmon))
    _say(quiet, f"run: n={grid.n}, steps={cfg.n_steps}, dt={cfg.dt:g}, model={cfg.model_kind}")
    final = evolve(rhs, bc, s0, cfg.dt, cfg.n_steps, observers)
    snaps(final.step, final.t, final.u, final.v)
    if emon is not None:
        write_series(os.path.join(out_dir, "energy.dat"), cfg,
                     "t kinetic nonlocal potential total_printed total_hamiltonian", emon.rows)
    _write_lines(os.path.join(out_dir, "run.cfg"),
                 serialize_config(cfg.mapping).splitlines())
    _say(quiet, f"run: done at t={final.t:g}, boundary residual {bmon.worst:.3e}")
    return {"final": final, "boundary_residual": bmon.worst, "grid": grid,
            "energy_rows": emon.rows if emon else []}


def cmd_validate(cfg: RunConfig, out_dir: str, quiet: bool = False) -> dict:
    """Collocation vs finite-difference solution of the same scenario."""
    os.makedirs(out_dir, exist_ok=True)
    if cfg.model_kind == "classical-local":
        raise ConfigurationError("validate compares the nonlocal solvers; use a nonlocal model.kind")
    grid, table, rhs, bc, s0 = spectral_setup(cfg)
    _say(quiet, f"validate: spectral n={grid.n} ({cfg.model_kind}, {table.quadrature})")
    final = evolve(rhs, bc, s0, cfg.dt, cfg.n_steps)

    fd_grid = build_fd_grid(cfg.validate_fd_m, cfg.a, cfg.b)
    fd_spec = kernel_spec_for(cfg, fd_grid.spacing)
    u0, v0 = initial_condition_at(cfg.scenario, fd_grid.nodes)
    _say(quiet, f"validate: fd m={fd_grid.m}")
    u_fd = fd_evolve(fd_grid, fd_spec, u0, v0, cfg.dt, cfg.n_steps, sign=cfg.sign)

    u_spec_on_fd = barycentric_interpolate(grid, final.u, fd_grid.nodes)
    err_sq = relative_l2_error(u_spec_on_fd, u_fd)
    rows = zip(fd_grid.nodes, u_fd, u_spec_on_fd)
    lines = _header(cfg, SERIES_FORMAT, {"columns": "x u_fd u_spectral", "t": _fmt(final.t),
                                         "rel_l2": _fmt(err_sq)})
    lines += [f"{_fmt(x)} {_fmt(a)} {_fmt(b)}" for x, a, b in rows]
    _write_lines(os.path.join(out_dir, "overlay.dat"), lines)
    if cfg.plots:
        plots.overlay(os.path.join(out_dir, "overlay.png"), fd_grid.nodes,
                      [("finite difference", u_fd), ("spectral", u_spec_on_fd)],
                      f"{cfg.scenario.name} at t={cfg.t_final:g} (rel L2 {err_sq:.2e})")
    _say(quiet, f"validate: rel L2 difference {err_sq:.4e}")
    return {"rel_l2": err_sq, "u_fd": u_fd, "u_spectral": u_spec_on_fd,
            "fd_nodes": fd_grid.nodes, "t": final.t}


def cmd_converge(cfg: RunConfig, out_dir: str, quiet: bool = False) -> dict:
    """Error table against the high-resolution FD reference."""
    os.makedirs(out_dir, exist_ok=True)
    m_ref = cfg.converge_reference_m
    ref_grid = build_fd_grid(m_ref, cfg.a, cfg.b)
    ref_spec = kernel_spec_for(cfg, ref_grid.spacing, cutoff=cfg.converge_reference_cutoff)
    u0, v0 = initial_condition_at(cfg.scenario, ref_grid.nodes)
    _say(quiet, f"converge: fd reference m={m_ref}, steps={cfg.n_steps}")
    u_ref = fd_evolve(ref_grid, ref_spec, u0, v0, cfg.dt, cfg.n_steps, sign=cfg.sign)

    fd_errors, cheb_errors = [], []
    for n in cfg.converge_resolutions:
        if m_ref % n != 0:
            raise ConfigurationError(
                f"converge.reference_m={m_ref} must be a multiple of resolution {n}"
            )
        fd_grid = build_fd_grid(n, cfg.a, cfg.b)
        fd_spec = kernel_spec_for(cfg, fd_grid.spacing)
        fu0, fv0 = initial_condition_at(cfg.scenario, fd_grid.nodes)
        u_fd = fd_evolve(fd_grid, fd_spec, fu0, fv0, cfg.dt, cfg.n_steps, sign=cfg.sign)
        fd_err = relative_l2_error(u_fd, u_ref[:: m_ref // n])
        fd_errors.append(fd_err)

        grid, table, rhs, bc, s0 = spectral_setup(
            cfg, n=n, quadrature=cfg.converge_spectral_quadrature,
            cutoff=cfg.converge_spectral_cutoff, delta=cfg.converge_spectral_delta,
        )
        final = evolve(rhs, bc, s0, cfg.dt, cfg.n_steps)
        u_on_ref = barycentric_interpolate(grid, final.u, ref_grid.nodes)
        cheb_err = relative_l2_error(u_on_ref, u_ref)
        cheb_errors.append(cheb_err)
        _say(quiet, f"converge: N={n}: fd {fd_err:.4e}, chebyshev {cheb_err:.4e}")

    fd_report = make_error_report(zip(cfg.converge_resolutions, fd_errors))
    cheb_report = make_error_report(zip(cfg.converge_resolutions, cheb_errors))

    rows = []
    for i, n in enumerate(cfg.converge_resolutions):
        fd_rate = fd_report.pairwise_rates[i - 1] if i else float("nan")
        ch_rate = cheb_report.pairwise_rates[i - 1] if i else float("nan")
        rows.append((n, fd_errors[i], fd_rate, cheb_errors[i], ch_rate))
    lines = _header(cfg, SERIES_FORMAT,
                    {"columns": "N fd_error fd_rate cheb_error cheb_rate",
                     "fd_fitted_rate": _fmt(fd_report.fitted_rate),
                     "cheb_fitted_rate": _fmt(cheb_report.fitted_rate)})
    for n, fe, fr, ce, cr in rows:
        lines.append(f"{n} {_fmt(fe)} {_fmt(fr)} {_fmt(ce)} {_fmt(cr)}")
    _write_lines(os.path.join(out_dir, "table.dat"), lines)
    if cfg.plots:
        plots.loglog_errors(os.path.join(out_dir, "convergence.png"),
                            [("finite difference", cfg.converge_resolutions, fd_errors),
                             ("chebyshev", cfg.converge_resolutions, cheb_errors)],
                            "relative L2 error vs reference")
    _say(quiet, f"converge: fd fitted rate {fd_report.fitted_rate:.3f}, "
                f"chebyshev fitted rate {cheb_report.fitted_rate:.3f}")
    return {"fd": fd_report, "chebyshev": cheb_report}


def cmd_energy(cfg: RunConfig, out_dir: str, quiet: bool = False,
               node_quadrature: str | None = None) -> dict:
    """Energy-conservation experiment: E(t)/E(0) for both conventions.

    node_quadrature (or the energy.node_quadrature key) picks the weights
    for the kinetic/potential integrals: "clenshaw-curtis" matches the grid
    quadrature, "trapezoid" matches the operator's node weights, which makes
    the Hamiltonian total the conserved quantity of the discrete flow.
    """
    os.makedirs(out_dir, exist_ok=True)
    if cfg.model_kind == "classical-local":
        raise ConfigurationError("energy experiment needs a nonlocal model.kind")
    grid, table, rhs, bc, s0 = spectral_setup(cfg)
    emon = EnergyMonitor(grid, table,
                         node_quadrature=node_quadrature or cfg.energy_node_quadrature)
    bmon = BoundaryResidualMonitor(bc)
    _say(quiet, f"energy: n={grid.n}, steps={cfg.n_steps}, dt={cfg.dt:g}")
    final = evolve(rhs, bc, s0, cfg.dt, cfg.n_steps,
                   [strided(cfg.stride, emon), strided(cfg.stride, bmon)])
    if (final.step % cfg.stride) != 0:
        emon(final.step, final.t, final.u, final.v)
    write_series(os.path.join(out_dir, "energy.dat"), cfg,
                 "t kinetic nonlocal potential total_printed total_hamiltonian", emon.rows)
    rows = np.asarray(emon.rows)
    t = rows[:, 0]
    ham = rows[:, 5]
    printed = rows[:, 4]
    ham_ratio = ham / ham[0]
    peak = float(np.abs(ham_ratio - 1.0).max())
    if cfg.plots:
        series = [("hamiltonian total", ham_ratio)]
        if printed[0] != 0.0:
            series.append(("printed total", printed / printed[0]))
        plots.energy_series(os.path.join(out_dir, "energy.png"), t, series,
                            f"energy ratio, peak dev {peak:.2e}")
    _say(quiet, f"energy: peak |E/E0 - 1| = {peak:.4e} (hamiltonian total), "
                f"boundary residual {bmon.worst:.3e}")
    return {"t": t, "hamiltonian": ham, "printed": printed, "peak_deviation": peak,
            "boundary_residual": bmon.worst, "rows": emon.rows}


def _classical_comparator(cfg: RunConfig, grid: Grid, bc: BcSolver, obs_times: np.ndarray,
                          quiet: bool) -> list[np.ndarray]:
    """Classical-local run on the same grid, sampled exactly at obs_times.

    The classical operator is stiff on collocation grids, so it gets its own
    (smaller) stable step; segments land exactly on the observation times.
    """
    dyn = DynamicsSpec(model="classical-local", wave_speed=cfg.wave_speed, sign=cfg.sign)
    rhs = make_rhs(dyn, grid, None)
    u0, v0 = initial_condition(cfg.scenario, grid)
    state = State(u=bc.enforce(u0), v=bc.enforce(v0), t=0.0)
    fields = [state.u.copy()]
    interval = float(obs_times[1] - obs_times[0])
    substeps = max(1, int(np.ceil(interval / cfg.dispersive_classical_dt - 1e-12)))
    dt_c = interval / substeps
    _say(quiet, f"dispersive: classical comparator dt={dt_c:g} ({substeps} substeps/obs)")
    for _ in obs_times[1:]:
        state = evolve(rhs, bc, state, dt_c, substeps)
        fields.append(state.u.copy())
    return fields


def _arrival_time(times, fields, monitor_nodes, threshold) -> float:
    base = fields[0]
    for t, u in zip(times, fields):
        for j in monitor_nodes:
            if abs(u[j] - base[j]) >= threshold:
                return float(t)
    return float("nan")


def cmd_dispersive(cfg: RunConfig, out_dir: str, quiet: bool = False) -> dict:
    """Nonlocal vs classical trajectories, horizon sweep, arrival delays.

    The figure-analogue run compares the configured kernel against the
    classical solver on the configured grid. The horizon sweep may run on
    its own (finer) grid and with the unit-speed normalization, so the
    delta -> 0 trend isolates dispersion instead of the raw stiffness gap.
    """
    os.makedirs(out_dir, exist_ok=True)
    if cfg.model_kind == "classical-local":
        raise ConfigurationError("dispersive experiment needs a nonlocal model.kind")
    if cfg.n_steps % cfg.stride != 0:
        raise ConfigurationError("dispersive: output.stride must divide time.n_steps")
    n_obs = cfg.n_steps // cfg.stride
    if cfg.dispersive_sweep_n_steps % n_obs != 0:
        raise ConfigurationError(
            "dispersive: dispersive.sweep_n_steps must be a multiple of n_steps/stride"
        )
    obs_times = np.array([k * cfg.stride * cfg.dt for k in range(n_obs + 1)])
    thr = cfg.dispersive_arrival_threshold

    def nonlocal_run(grid, bc, delta, n_steps, rescale) -> FieldRecorder:
        run_stride = n_steps // n_obs
        spec = kernel_spec_for(cfg, grid.min_spacing(), delta)
        scale = 1.0 / effective_stiffness(spec) if rescale else 1.0
        table = build_kernel_table(spec, grid, quadrature=cfg.quadrature, scale=scale)
        dyn = DynamicsSpec(model=cfg.model_kind, kernel=table.spec, sign=cfg.sign)
        rhs = make_rhs(dyn, grid, table)
        u0, v0 = initial_condition(cfg.scenario, grid)
        rec = FieldRecorder()
        evolve(rhs, bc, State(u=bc.enforce(u0), v=bc.enforce(v0), t=0.0),
               cfg.t_final / n_steps, n_steps, [strided(run_stride, rec)])
        return rec

    # figure-analogue pair at the configured grid, delta and step count
    grid = build_grid(cfg.n, cfg.a, cfg.b)
    bc = BcSolver(grid)
    monitor = (1, grid.n - 1)
    classical_fields = _classical_comparator(cfg, grid, bc, obs_times, quiet)
    t_arr_classical = _arrival_time(obs_times, classical_fields, monitor, thr)
    _say(quiet, f"dispersive: pinned nonlocal run delta={cfg.delta}, steps={cfg.n_steps}")
    pinned = nonlocal_run(grid, bc, cfg.delta, cfg.n_steps, cfg.rescale_to_unit_speed)
    dist_rows = [(t, relative_l2_error(u_nl, u_cl))
                 for t, u_nl, u_cl in zip(obs_times, pinned.fields, classical_fields)
                 if np.any(u_cl[1:])]
    t_arr_nonlocal = _arrival_time(obs_times, pinned.fields, monitor, thr)
    final_distance = dist_rows[-1][1]
    write_series(os.path.join(out_dir, "distance.dat"), cfg, "t rel_l2", dist_rows)
    write_series(os.path.join(out_dir, "spacetime_nonlocal.dat"), cfg,
                 "t then u-row per observation",
                 [(t, *u) for t, u in zip(obs_times, pinned.fields)])
    write_series(os.path.join(out_dir, "spacetime_classical.dat"), cfg,
                 "t then u-row per observation",
                 [(t, *u) for t, u in zip(obs_times, classical_fields)])

    # horizon sweep for the delta -> 0 trend, on its own grid when configured
    sweep_rescale = (cfg.rescale_to_unit_speed if cfg.dispersive_sweep_rescale is None
                     else cfg.dispersive_sweep_rescale)
    if cfg.dispersive_sweep_n is None or cfg.dispersive_sweep_n == cfg.n:
        sweep_grid, sweep_bc = grid, bc
        sweep_classical = classical_fields
    else:
        sweep_grid = build_grid(cfg.dispersive_sweep_n, cfg.a, cfg.b)
        sweep_bc = BcSolver(sweep_grid)
        sweep_classical = _classical_comparator(cfg, sweep_grid, sweep_bc, obs_times, quiet)
    sweep_monitor = (1, sweep_grid.n - 1)
    t_arr_sweep_classical = _arrival_time(obs_times, sweep_classical, sweep_monitor, thr)
    sweep_rows = []
    for delta in cfg.dispersive_deltas:
        rec = nonlocal_run(sweep_grid, sweep_bc, delta,
                           cfg.dispersive_sweep_n_steps, sweep_rescale)
        d_final = relative_l2_error(rec.fields[-1], sweep_classical[-1])
        t_arr = _arrival_time(obs_times, rec.fields, sweep_monitor, thr)
        sweep_rows.append((delta, d_final, t_arr - t_arr_sweep_classical))
        _say(quiet, f"dispersive: delta={delta:g}: final distance {d_final:.4e}")
    write_series(os.path.join(out_dir, "sweep.dat"), cfg,
                 "delta final_rel_l2 arrival_delay", sweep_rows)

    if cfg.plots:
        plots.spacetime(os.path.join(out_dir, "spacetime_nonlocal.png"), grid.nodes_phys,
                        obs_times, np.array(pinned.fields), f"nonlocal {cfg.scenario.name}")
        plots.spacetime(os.path.join(out_dir, "spacetime_classical.png"), grid.nodes_phys,
                        obs_times, np.array(classical_fields), f"classical {cfg.scenario.name}")
        plots.overlay(os.path.join(out_dir, "distance.png"),
                      [r[0] for r in dist_rows], [("rel L2(t)", [r[1] for r in dist_rows])],
                      "nonlocal vs classical divergence", xlabel="t", ylabel="rel L2")
    delay = t_arr_nonlocal - t_arr_classical
    _say(quiet, f"dispersive: final distance {final_distance:.4e}, arrival delay {delay:g}")
    return {
        "final_distance": final_distance,
        "distance_series": dist_rows,
        "sweep": sweep_rows,
        "arrival_delay": delay,
        "obs_times": obs_times,
    }
