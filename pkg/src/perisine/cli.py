"""Command-line experiment drivers.

Subcommands: run, validate, converge, energy, dispersive. Each takes an
experiment capsule (--config) plus repeatable --override key=value flags.
Exit codes: 0 success, 2 configuration error, 3 numerical divergence,
4 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .config import load_config
from .errors import ConfigurationError, DivergenceError
from . import experiments

COMMANDS = {
    "run": experiments.cmd_run,
    "validate": experiments.cmd_validate,
    "converge": experiments.cmd_converge,
    "energy": experiments.cmd_energy,
    "dispersive": experiments.cmd_dispersive,
}

EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perisine",
        description="Experiment drivers for the nonlocal sine-Gordon solver.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"{name} experiment")
        p.add_argument("--config", required=True, help="experiment capsule file")
        p.add_argument("--out", default=None, help="output directory (default: out-<command>)")
        p.add_argument(
            "--override",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config key (repeatable)",
        )
        p.add_argument("--stride", type=int, default=None, help="override output.stride")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")
    return parser


def _parse_overrides(pairs) -> dict[str, str]:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigurationError(f"--override expects KEY=VALUE, got {pair!r}")
        key, value = pair.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = _parse_overrides(args.override)
        if args.stride is not None:
            overrides["output.stride"] = str(args.stride)
        cfg = load_config(args.config, overrides)
        out_dir = args.out or f"out-{args.command}"
        COMMANDS[args.command](cfg, out_dir, quiet=args.quiet)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
