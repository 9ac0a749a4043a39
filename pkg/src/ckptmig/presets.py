"""Scenario presets and the default evaluation grids.

Presets live in ``data/presets.json`` as plain data so they can be edited
(or swapped via ``--presets``) without touching code. Each entry maps a
scenario name to its per-event costs in minutes: C (checkpoint save),
R (recovery), D (reboot), M (migration).
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import ParameterError
from .failures import MINUTES_PER_DAY, MINUTES_PER_MONTH, MINUTES_PER_WEEK, MINUTES_PER_YEAR
from .throughput import CostParams

GRID_MTBF_MINUTES = (MINUTES_PER_DAY, MINUTES_PER_WEEK, MINUTES_PER_MONTH, MINUTES_PER_YEAR)
GRID_MACHINES = (10_000, 100_000, 1_000_000)
GRID_EPSILON = (1e-4, 1e-6)

YIELD_DEFAULT_MACHINES = (2**8, 2**11, 2**14, 2**17, 2**20)
YIELD_DEFAULT_MTBF_MINUTES = (MINUTES_PER_MONTH, MINUTES_PER_YEAR)


def load_presets(path: str | Path | None = None) -> dict[str, CostParams]:
    """Load scenario presets from ``path`` or the packaged defaults."""
    if path is None:
        raw = json.loads(resources.files("ckptmig").joinpath("data/presets.json").read_text())
    else:
        raw = json.loads(Path(path).read_text())
    presets = {}
    for name, entry in raw.items():
        try:
            presets[name] = CostParams(
                checkpoint=float(entry["C"]),
                recovery=float(entry["R"]),
                downtime=float(entry["D"]),
                migration=float(entry["M"]),
            )
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"preset {name!r} must define numeric C, R, D, M: {exc}") from exc
    return presets
