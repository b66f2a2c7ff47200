"""Flat key-value experiment configuration.

One experiment is one text file of `section.key = value` lines; CLI flags
override file keys. Parsing resolves the time discretization (exactly one
of time.n_steps / time.dt may be given) and echoes the fully resolved
mapping into every output file header, so a data file names the experiment
that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError
from .scenarios import ScenarioSpec

_BOOL = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}

DEFAULTS = {
    "model.kind": "nonlocal-quadrature",
    "model.sign": "diffusive",
    "model.wave_speed": "1.0",
    "grid.n": "400",
    "grid.a": "-1.0",
    "grid.b": "1.0",
    "kernel.alpha": "0.4",
    "kernel.delta": "0.2",
    "kernel.cutoff": "auto",
    "kernel.quadrature": "trapezoid",
    "kernel.rescale_to_unit_speed": "false",
    "scenario.name": "kink",
    "scenario.c": "0.999",
    "scenario.w": "0.4",
    "scenario.amplitude": "1.0",
    "scenario.width": "0.002",
    "time.t_final": "1.0",
    "time.n_steps": "",
    "time.dt": "",
    "output.stride": "100",
    "output.plots": "true",
    "validate.fd_m": "400",
    "converge.resolutions": "100,200,400,800",
    "converge.reference_m": "1600",
    "converge.spectral_quadrature": "",
    "converge.spectral_cutoff": "",
    "converge.spectral_delta": "",
    "converge.reference_cutoff": "",
    "energy.node_quadrature": "clenshaw-curtis",
    "dispersive.deltas": "0.2,0.1,0.05",
    "dispersive.sweep_n_steps": "1600",
    "dispersive.sweep_n": "",
    "dispersive.sweep_rescale": "",
    "dispersive.classical_dt": "1e-4",
    "dispersive.arrival_threshold": "3.141592653589793",
}


def parse_config_text(text: str) -> dict[str, str]:
    """Parse `key = value` lines; '#' starts a comment; blank lines ignored."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigurationError(f"line {lineno}: empty key")
        out[key] = value
    return out


def serialize_config(mapping: dict[str, str]) -> str:
    return "\n".join(f"{k} = {mapping[k]}" for k in sorted(mapping)) + "\n"


def _get(mapping, key, parser):
    raw = mapping[key]
    try:
        return parser(raw)
    except ConfigurationError:
        raise
    except Exception as exc:
        raise ConfigurationError(f"{key}: cannot parse value {raw!r} ({exc})") from None


def _float(raw):
    return float(raw)


def _int(raw):
    v = float(raw)
    if v != int(v):
        raise ValueError("not an integer")
    return int(v)


def _bool(raw):
    try:
        return _BOOL[raw.strip().lower()]
    except KeyError:
        raise ValueError("expected true/false") from None


def _float_list(raw):
    return tuple(float(p) for p in raw.split(",") if p.strip())


def _int_list(raw):
    return tuple(_int(p) for p in raw.split(",") if p.strip())


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved experiment configuration."""

    model_kind: str
    sign: str
    wave_speed: float
    n: int
    a: float
    b: float
    alpha: float
    delta: float
    cutoff: float | None  # None = derive from the grid's minimal spacing
    quadrature: str
    rescale_to_unit_speed: bool
    scenario: ScenarioSpec
    t_final: float
    n_steps: int
    dt: float
    stride: int
    plots: bool
    validate_fd_m: int
    converge_resolutions: tuple
    converge_reference_m: int
    converge_spectral_quadrature: str
    converge_spectral_cutoff: float | None
    converge_spectral_delta: float | None
    converge_reference_cutoff: float | None
    energy_node_quadrature: str
    dispersive_deltas: tuple
    dispersive_sweep_n_steps: int
    dispersive_sweep_n: int | None
    dispersive_sweep_rescale: bool | None
    dispersive_classical_dt: float
    dispersive_arrival_threshold: float
    mapping: dict


def resolve_config(user: dict[str, str]) -> RunConfig:
    """Validate a raw mapping against the key registry and type it."""
    unknown = sorted(set(user) - set(DEFAULTS))
    if unknown:
        raise ConfigurationError(f"unknown configuration key(s): {', '.join(unknown)}")
    m = dict(DEFAULTS)
    m.update(user)

    t_final = _get(m, "time.t_final", _float)
    if t_final <= 0:
        raise ConfigurationError(f"time.t_final: must be positive, got {t_final}")
    has_steps = m["time.n_steps"] != ""
    has_dt = m["time.dt"] != ""
    if has_steps == has_dt:
        raise ConfigurationError("time: exactly one of time.n_steps / time.dt must be set")
    if has_steps:
        n_steps = _get(m, "time.n_steps", _int)
        if n_steps < 1:
            raise ConfigurationError(f"time.n_steps: must be >= 1, got {n_steps}")
        dt = t_final / n_steps
    else:
        dt = _get(m, "time.dt", _float)
        if dt <= 0:
            raise ConfigurationError(f"time.dt: must be positive, got {dt}")
        ratio = t_final / dt
        n_steps = int(round(ratio))
        if n_steps < 1 or abs(ratio - n_steps) > 1e-9 * max(ratio, 1.0):
            raise ConfigurationError(
                f"time.dt: t_final/dt = {ratio!r} is not a whole number of steps"
            )
    m["time.n_steps"] = str(n_steps)
    m["time.dt"] = repr(dt)

    n = _get(m, "grid.n", _int)
    if n < 2:
        raise ConfigurationError(f"grid.n: runs need degree >= 2, got {n}")
    a = _get(m, "grid.a", _float)
    b = _get(m, "grid.b", _float)
    if not b > a:
        raise ConfigurationError(f"grid: need a < b, got a={a}, b={b}")

    cutoff_raw = m["kernel.cutoff"].strip().lower()
    cutoff = None if cutoff_raw == "auto" else _get(m, "kernel.cutoff", _float)

    scenario = ScenarioSpec(
        name=m["scenario.name"].strip(),
        c=_get(m, "scenario.c", _float),
        w=_get(m, "scenario.w", _float),
        amplitude=_get(m, "scenario.amplitude", _float),
        width=_get(m, "scenario.width", _float),
    )

    stride = _get(m, "output.stride", _int)
    if stride < 1:
        raise ConfigurationError(f"output.stride: must be >= 1, got {stride}")

    spectral_quad = m["converge.spectral_quadrature"].strip() or m["kernel.quadrature"].strip()

    def _opt_cutoff(key):
        raw = m[key].strip()
        return None if raw == "" else _get(m, key, _float)

    spectral_cutoff = _opt_cutoff("converge.spectral_cutoff")
    spectral_delta = _opt_cutoff("converge.spectral_delta")
    reference_cutoff = _opt_cutoff("converge.reference_cutoff")

    return RunConfig(
        model_kind=m["model.kind"].strip(),
        sign=m["model.sign"].strip(),
        wave_speed=_get(m, "model.wave_speed", _float),
        n=n,
        a=a,
        b=b,
        alpha=_get(m, "kernel.alpha", _float),
        delta=_get(m, "kernel.delta", _float),
        cutoff=cutoff,
        quadrature=m["kernel.quadrature"].strip(),
        rescale_to_unit_speed=_get(m, "kernel.rescale_to_unit_speed", _bool),
        scenario=scenario,
        t_final=t_final,
        n_steps=n_steps,
        dt=dt,
        stride=stride,
        plots=_get(m, "output.plots", _bool),
        validate_fd_m=_get(m, "validate.fd_m", _int),
        converge_resolutions=_get(m, "converge.resolutions", _int_list),
        converge_reference_m=_get(m, "converge.reference_m", _int),
        converge_spectral_quadrature=spectral_quad,
        converge_spectral_cutoff=spectral_cutoff,
        converge_spectral_delta=spectral_delta,
        converge_reference_cutoff=reference_cutoff,
        energy_node_quadrature=m["energy.node_quadrature"].strip(),
        dispersive_deltas=_get(m, "dispersive.deltas", _float_list),
        dispersive_sweep_n_steps=_get(m, "dispersive.sweep_n_steps", _int),
        dispersive_sweep_n=(None if m["dispersive.sweep_n"].strip() == ""
                            else _get(m, "dispersive.sweep_n", _int)),
        dispersive_sweep_rescale=(None if m["dispersive.sweep_rescale"].strip() == ""
                                  else _get(m, "dispersive.sweep_rescale", _bool)),
        dispersive_classical_dt=_get(m, "dispersive.classical_dt", _float),
        dispersive_arrival_threshold=_get(m, "dispersive.arrival_threshold", _float),
        mapping=m,
    )


def load_config(path: str, overrides: dict[str, str] | None = None) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        user = parse_config_text(fh.read())
    if overrides:
        user.update(overrides)
    return resolve_config(user)
