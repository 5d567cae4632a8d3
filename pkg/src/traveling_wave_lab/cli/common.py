# src/traveling_wave_lab/cli/common.py

"""Flags, logging and error handling shared by every command."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .. import config
from ..errors import ConfigError, TravelingWaveError
from ..nonlinearities import FluxSpec, ReactionSpec, ShockTriple
from ..outputs import dumps, output_dir, validate
from ..run_config import RunConfig

logger = logging.getLogger(__name__)

Command = Callable[[RunConfig, argparse.Namespace], dict]


def base_parser(prog: str, description: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=prog, description=description)
    parser.add_argument("--config", type=Path, default=None, help="run configuration (section.key = value)")
    parser.add_argument("--out", type=Path, default=None, help="output directory")
    parser.add_argument("--threads", type=int, default=None, help="worker processes for scans and sweeps")
    parser.add_argument("--seed", type=int, default=None, help="seed of randomized checks")
    parser.add_argument("--svg", action="store_true", help="also write SVG figures")
    parser.add_argument("--progress", action="store_true", help="show progress bars")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v INFO, -vv DEBUG")
    return parser


def _set_verbosity(verbose: int) -> None:
    if verbose <= 0:
        return
    level = logging.INFO if verbose == 1 else logging.DEBUG
    logging.getLogger("traveling_wave_lab").setLevel(level)


def load_run_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.load(args.config).with_overrides(
        output__dir=None if args.out is None else str(args.out),
        run__threads=args.threads,
        run__seed=args.seed,
        output__svg=True if args.svg else None,
    )
    threads = cfg.get("run.threads", config.THREADS)
    if threads < 1:
        raise ConfigError(f"threads must be at least 1, got {threads}", threads=threads)
    return cfg


def threads(cfg: RunConfig) -> int:
    return cfg.get("run.threads", config.THREADS)


def rng(cfg: RunConfig) -> np.random.Generator:
    return np.random.default_rng(cfg.get("run.seed", 0))


def out_dir(cfg: RunConfig) -> Path:
    return output_dir(cfg.get("output.dir"))


def wants_svg(cfg: RunConfig) -> bool:
    return bool(cfg.get("output.svg", False))


def run_command(command: Command, args: argparse.Namespace) -> int:
    """
    Run one command and map library errors to exit codes.

    The success report and any error object are printed as JSON on stdout.
    """
    _set_verbosity(args.verbose)
    if args.progress:
        config.SHOW_PROGRESS = True
    try:
        cfg = load_run_config(args)
        report = command(cfg, args)
    except TravelingWaveError as err:
        payload = validate(err.to_dict(), "error")
        sys.stdout.write(dumps(payload))
        logger.info("%s: %s", type(err).__name__, err.message)
        return err.exit_code
    sys.stdout.write(dumps(report))
    return 0


def main_from(parser: argparse.ArgumentParser, command: Command, argv: Sequence[str] | None) -> int:
    args = parser.parse_args(argv)
    return run_command(command, args)


# ---------- shared builders ----------


def flux_from(cfg: RunConfig) -> FluxSpec:
    return FluxSpec.from_kind(cfg.get("flux.kind", "cubic"), cfg.get("flux.coefficients"))


def triple_from(cfg: RunConfig, f: FluxSpec) -> ShockTriple:
    """Shock triple from the config; the speed defaults to the Rankine-Hugoniot value."""
    u_minus = cfg.require("shock.u_minus")
    u_plus = cfg.require("shock.u_plus")
    if "shock.c" in cfg:
        return ShockTriple(u_minus, u_plus, cfg.get("shock.c"))
    return ShockTriple.from_flux(f, u_minus, u_plus)


def reaction_from(cfg: RunConfig) -> tuple[ReactionSpec, float, float]:
    """Reaction term and its endstates (defaults u_- = 1, u_+ = 0)."""
    kind = cfg.get("reaction.kind", "bistable_cubic")
    if kind == "bistable_cubic":
        r = ReactionSpec.bistable_cubic(cfg.get("reaction.a0", 0.3))
    elif kind == "logistic":
        r = ReactionSpec.logistic()
    elif kind == "polynomial":
        r = ReactionSpec.polynomial(cfg.require("reaction.coefficients"))
    else:
        raise ConfigError(f"reaction kind {kind!r} needs a flux and a shock triple", kind=kind)
    return r, cfg.get("reaction.u_minus", 1.0), cfg.get("reaction.u_plus", 0.0)
