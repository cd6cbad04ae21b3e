"""
JSON run descriptions.

A document describes one run or one sweep. ``sizes`` is either a list of ints
(one grid) or a list of such lists (spatial sweep); ``n_steps`` is either an
int or a list of ints (temporal sweep). At most one of them may sweep.
"""
import json
from dataclasses import MISSING, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from eifg.core.exceptions import ConfigError
from eifg.core.phi import SCHEMES
from eifg.core.transform import DEALIAS_RULES

REFERENCE_MODES = ("exact", "finest")


@dataclass
class RunConfig:
    problem: str
    sizes: Any
    T: float
    n_steps: Any
    params: Dict[str, Any] = field(default_factory=dict)
    scheme: str = "eifg2"
    c2: float = 0.5
    dealias: str = "none"
    seed: Optional[int] = None
    output_dir: Optional[str] = None
    snapshot_stride: Optional[int] = None
    diagnostics_stride: int = 1
    reference: str = "exact"

    def __post_init__(self):
        for key in ("problem", "scheme", "dealias", "reference"):
            if not isinstance(getattr(self, key), str):
                raise ConfigError(f"{key} must be a string, got {getattr(self, key)!r}")
        if self.output_dir is not None and not isinstance(self.output_dir, str):
            raise ConfigError(f"output_dir must be a string, got {self.output_dir!r}")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if not _is_number(self.c2) or not 0 < self.c2 <= 1:
            raise ConfigError(f"c2 must lie in (0, 1], got {self.c2}")
        if self.dealias not in DEALIAS_RULES:
            raise ConfigError(f"unknown dealias rule {self.dealias!r}")
        if self.reference not in REFERENCE_MODES:
            raise ConfigError(f"reference must be one of {REFERENCE_MODES}")
        if not _is_number(self.T) or not self.T > 0:
            raise ConfigError(f"T must be a positive number, got {self.T!r}")
        if not isinstance(self.params, dict):
            raise ConfigError("params must be an object")
        if self.seed is not None and not _is_int(self.seed):
            raise ConfigError(f"seed must be an integer, got {self.seed!r}")
        if self.snapshot_stride is not None and not (
            _is_int(self.snapshot_stride) and self.snapshot_stride >= 0
        ):
            raise ConfigError(f"snapshot_stride must be an int >= 0, got {self.snapshot_stride!r}")
        if not _is_int(self.diagnostics_stride) or self.diagnostics_stride < 1:
            raise ConfigError(f"diagnostics_stride must be an int >= 1, got {self.diagnostics_stride!r}")
        self.T = float(self.T)
        self.c2 = float(self.c2)
        self.grids = _grid_list(self.sizes)
        self.steps = _step_list(self.n_steps)
        if len(self.grids) > 1 and len(self.steps) > 1:
            raise ConfigError("sweep either the grid sizes or the step counts, not both")

    @property
    def mode(self) -> str:
        if len(self.grids) > 1:
            return "spatial"
        if len(self.steps) > 1:
            return "temporal"
        return "single"

    def resolutions(self) -> List[Tuple[Tuple[int, ...], int]]:
        return [(sizes, n) for sizes in self.grids for n in self.steps]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("a run description must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        missing = sorted(
            f.name for f in fields(cls)
            if f.name not in data and f.default is MISSING and f.default_factory is MISSING
        )
        if missing:
            raise ConfigError(f"missing config keys: {', '.join(missing)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            with open(Path(path), encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: invalid JSON ({e})") from e
        return cls.from_dict(data)


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _grid_list(sizes) -> List[Tuple[int, ...]]:
    if not isinstance(sizes, list) or not sizes:
        raise ConfigError("sizes must be a non-empty list")
    if all(_is_int(n) for n in sizes):
        return [tuple(sizes)]
    if not all(isinstance(s, list) and s and all(_is_int(n) for n in s) for s in sizes):
        raise ConfigError("sizes must be a list of ints or a list of lists of ints")
    grids = [tuple(s) for s in sizes]
    for coarse, fine in zip(grids, grids[1:]):
        if len(coarse) != len(fine) or not all(f >= c for c, f in zip(coarse, fine)) or coarse == fine:
            raise ConfigError("spatial sweep must be strictly increasing")
    return grids


def _step_list(n_steps) -> List[int]:
    steps = n_steps if isinstance(n_steps, list) else [n_steps]
    if not steps or not all(_is_int(n) and n >= 1 for n in steps):
        raise ConfigError("n_steps must be a positive int or a list of them")
    if any(fine <= coarse for coarse, fine in zip(steps, steps[1:])):
        raise ConfigError("temporal sweep must be strictly increasing")
    return list(steps)
