# src/traveling_wave_lab/errors.py

from __future__ import annotations

from typing import Any


class TravelingWaveError(Exception):
    """
    Base class of every error raised by the library.

    Each subclass carries the CLI exit code it maps to and a machine-readable
    ``reason`` dictionary that the command-line front end prints as JSON.
    """

    exit_code: int = 1

    def __init__(self, message: str, **reason: Any) -> None:
        super().__init__(message)
        self.message = message
        self.reason = reason

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": "error",
            "error": type(self).__name__,
            "exit_code": self.exit_code,
            "message": self.message,
            "reason": self.reason,
        }


# ---------- exit 2 : configuration ----------


class ConfigError(TravelingWaveError, ValueError):
    exit_code = 2


class UnsupportedParameterError(ConfigError):
    """Parameters outside the range an operation supports (a = 1 with θ ≠ 0, α ∉ (0,1), ...)."""


class DegenerateMeasureError(UnsupportedParameterError):
    """a = 2: the Riesz-Feller operator has no jump part."""


class ResolutionError(ConfigError):
    def __init__(self, message: str, suggested_L: float | None = None, **reason: Any) -> None:
        super().__init__(message, suggested_L=suggested_L, **reason)
        self.suggested_L = suggested_L


# ---------- exit 3 : inconsistent input ----------


class InputError(TravelingWaveError, ValueError):
    exit_code = 3


class DegenerateInputError(InputError):
    """Equal endstates, empty grids, non-finite samples."""


class InconsistentTripleError(InputError):
    """Shock triple violating the Rankine-Hugoniot condition."""


class InvalidReactionError(InputError):
    """Reaction term that does not vanish at the endstates."""


# ---------- exit 4 : provably no traveling wave ----------


class NoTravelingWaveError(TravelingWaveError):
    exit_code = 4

    def __init__(self, message: str, condition: str, **reason: Any) -> None:
        super().__init__(message, condition=condition, **reason)
        self.condition = condition


# ---------- exit 5 : numerical non-convergence ----------


class NonConvergenceError(TravelingWaveError, RuntimeError):
    exit_code = 5


class BracketNotFoundError(NonConvergenceError):
    pass


class NoConnectionError(NonConvergenceError):
    pass


class NotConvergedError(NonConvergenceError):
    pass


class InstabilityError(NonConvergenceError):
    pass
