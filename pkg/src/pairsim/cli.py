"""Command-line interface.

Subcommands run | sweep | lda | homogeneous | compare take either a config
file (--config) or a named preset (--preset), with a few direct overrides.
Exit codes: 0 success, 1 invalid input or configuration, 2 numerical
failure during integration.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .config import (PRESET_DESCRIPTIONS, load_preset, parse_config,
                     preset_names)
from .errors import IntegrationDivergedError, ValidationError
from .runner import execute, run_compare, run_full, run_homogeneous, run_lda, run_sweep

_MODE_FOR_COMMAND = {"run": "full", "sweep": "full", "lda": "lda",
                     "homogeneous": "homogeneous", "compare": "compare"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairsim",
        description="Pair production from focused, chirped oscillating fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", metavar="PATH", help="config file to run")
        src.add_argument("--preset", metavar="NAME",
                         help="named preset (see 'pairsim presets')")
        p.add_argument("--out", metavar="DIR", help="output directory")
        p.add_argument("--threads", type=int, default=1, metavar="N",
                       help="worker processes for sweep points (default 1)")
        p.add_argument("--dt", type=float, metavar="DT",
                       help="override the integrator time step")
        p.add_argument("--snapshot-every", type=int, metavar="K",
                       help="write a binary state snapshot every K steps")

    for name in ("run", "sweep", "lda", "homogeneous", "compare"):
        add_common(sub.add_parser(name, help=f"{name} mode"))
    sub.add_parser("presets", help="list available presets")
    return parser


def _load_config(args):
    if args.preset:
        cfg = load_preset(args.preset)
    else:
        cfg = parse_config(args.config, is_path=True)
    cfg = replace(cfg, mode=_MODE_FOR_COMMAND[args.command])
    if args.command == "run":
        cfg.sweep = {}
    elif args.command == "sweep" and not cfg.sweep:
        raise ValidationError("sweep needs a [sweep] section in the config")
    if args.dt is not None:
        cfg.solver.dt = args.dt
    if args.snapshot_every is not None:
        cfg.snapshot_every = args.snapshot_every
    if args.out:
        cfg.out_dir = args.out
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "presets":
        for name in preset_names():
            print(f"{name:22s} {PRESET_DESCRIPTIONS.get(name, '')}")
        return 0
    try:
        cfg = _load_config(args)
        if args.command == "sweep":
            result = run_sweep(cfg, cfg.out_dir, threads=args.threads)
        else:
            result = execute(cfg, cfg.out_dir, threads=args.threads)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except IntegrationDivergedError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    for key in sorted(result):
        print(f"{key} = {result[key]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
