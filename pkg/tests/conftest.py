from __future__ import annotations

from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from traveling_wave_lab.grids import ProfileGrid
from traveling_wave_lab.nonlinearities import FluxSpec, ReactionSpec


@pytest.fixture
def burgers() -> FluxSpec:
    return FluxSpec.burgers()


@pytest.fixture
def cubic() -> FluxSpec:
    return FluxSpec.cubic()


@pytest.fixture
def bistable() -> ReactionSpec:
    """u(1-u)(u-0.3): exact front with speed 0.4/√2."""
    return ReactionSpec.bistable_cubic(0.3)


@pytest.fixture
def gaussian() -> ProfileGrid:
    return ProfileGrid.from_function(lambda x: np.exp(-(x**2)), -20.0, 20.0, 4001, left_state=0.0, right_state=0.0)


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[[dict[str, object]], Path]:
    """Write a flat ``section.key = value`` run configuration and return its path."""

    def _write(values: dict[str, object], name: str = "run.cfg") -> Path:
        lines = []
        for key, value in values.items():
            if isinstance(value, (tuple, list)):
                value = ",".join(str(v) for v in value)
            lines.append(f"{key} = {value}")
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write
