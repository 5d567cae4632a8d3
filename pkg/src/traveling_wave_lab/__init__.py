# src/traveling_wave_lab/__init__.py

from __future__ import annotations

import logging
import sys
from typing import Sequence

from . import config

logger = logging.getLogger("traveling_wave_lab")
if not logger.handlers:
    _handler = logging.StreamHandler()
    _handler.setFormatter(logging.Formatter("[%(levelname)s] %(name)s: %(message)s"))
    logger.addHandler(_handler)
    logger.setLevel(config.LOG_LEVEL)
    logger.propagate = False

COMMANDS = ("classify", "kernel", "tw", "region-scan", "pipeline")


def main(argv: Sequence[str] | None = None) -> int:
    """``traveling-wave-lab <command> [flags]``: dispatch to the cli modules."""
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS:
        sys.stderr.write(f"usage: traveling-wave-lab {{{','.join(COMMANDS)}}} [--config PATH] [--out DIR] ...\n")
        return 2
    command, rest = argv[0], argv[1:]
    if command == "classify":
        from .cli.classify import main as run
    elif command == "kernel":
        from .cli.kernel import main as run
    elif command == "tw":
        from .cli.tw import main as run
    elif command == "region-scan":
        from .cli.region_scan import main as run
    else:
        from .pipeline import main as run
    return run(rest)
