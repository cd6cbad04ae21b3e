"""
Norms, error tables, convergence rates and physical diagnostics.

Sobolev norms use the full weight (1 + |k~|^2)^s so that s = 0 is the plain
L2 norm and zero-mode errors stay visible in H1 and H2:

    ||u||_s = sqrt(|Omega| * sum_k (1 + |k~|^2)^s |u_hat_k|^2)
"""
import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import xlogy

from eifg.core.exceptions import ConfigError, ShapeError
from eifg.core.problems import FH_CLAMP
from eifg.core.transform import PhysicalField, SpectralField, forward, gradient, inverse, project

NORM_ORDERS = (0, 1, 2)


def sobolev_norm(u_hat: SpectralField, s: int = 0) -> float:
    if s not in NORM_ORDERS:
        raise ConfigError(f"Sobolev order must be one of {NORM_ORDERS}, got {s}")
    grid = u_hat.grid
    weight = (1.0 + grid.wavenumber_squared) ** s
    return float(np.sqrt(grid.volume * np.sum(weight * np.abs(u_hat.coeffs) ** 2)))


def solution_errors(
    numeric: SpectralField,
    reference: Union[PhysicalField, SpectralField],
) -> Tuple[float, float, float]:
    """
    (L2, H1, H2) norms of ``numeric - reference``.

    A nodal reference (exact solution sampled on the same grid) is differenced
    at the nodes; a spectral reference from another run is first projected
    onto the grid of ``numeric``.
    """
    if isinstance(reference, PhysicalField):
        nodal = inverse(numeric).values - reference.values
        diff = forward(PhysicalField(numeric.grid, nodal))
    else:
        ref = reference if reference.grid == numeric.grid else project(reference, numeric.grid)
        diff = SpectralField(numeric.grid, numeric.coeffs - ref.coeffs)
    return tuple(sobolev_norm(diff, s) for s in NORM_ORDERS)


@dataclass
class ErrorRecord:
    sizes: Tuple[int, ...]
    n_steps: int
    errors: Tuple[float, float, float]
    sec_per_step: float = float("nan")
    radius_error: Optional[float] = None

    @property
    def e0(self) -> float:
        return self.errors[0]

    @property
    def e1(self) -> float:
        return self.errors[1]

    @property
    def e2(self) -> float:
        return self.errors[2]


@dataclass
class RateTable:
    records: List[ErrorRecord]
    # rates[i] compares records[i-1] and records[i]; rates[0] is empty
    rates: List[Tuple[Optional[float], ...]] = field(default_factory=list)
    radius_rates: List[Optional[float]] = field(default_factory=list)


def _rate(coarse: Optional[float], fine: Optional[float], ratio: Optional[float]) -> Optional[float]:
    if coarse is None or fine is None or ratio is None:
        return None
    if not (math.isfinite(coarse) and math.isfinite(fine)) or coarse <= 0 or fine <= 0:
        return None
    return math.log(coarse / fine) / math.log(ratio)


def refinement_ratio(coarse: ErrorRecord, fine: ErrorRecord) -> Optional[float]:
    """Ratio of the one quantity refined between two records, else None."""
    same_space = tuple(coarse.sizes) == tuple(fine.sizes)
    same_time = coarse.n_steps == fine.n_steps
    if same_space and not same_time:
        return fine.n_steps / coarse.n_steps
    if same_time and not same_space:
        return max(fine.sizes) / max(coarse.sizes)
    return None


def rates(records: Sequence[ErrorRecord]) -> RateTable:
    records = list(records)
    if not records:
        raise ConfigError("at least one error record is needed")
    table = RateTable(records, rates=[(None, None, None)], radius_rates=[None])
    for coarse, fine in zip(records, records[1:]):
        ratio = refinement_ratio(coarse, fine)
        if ratio is not None and ratio <= 1:
            raise ConfigError("records must be ordered from coarse to fine")
        table.rates.append(
            tuple(_rate(c, f, ratio) for c, f in zip(coarse.errors, fine.errors))
        )
        table.radius_rates.append(_rate(coarse.radius_error, fine.radius_error, ratio))
    return table


def observed_order(steps: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(step)."""
    slope, _ = np.polyfit(np.log(np.asarray(steps, float)), np.log(np.asarray(errors, float)), 1)
    return float(slope)


class InterfaceRadius(NamedTuple):
    radius: float
    collapsed: bool


def interface_radius(u: PhysicalField) -> InterfaceRadius:
    """Radius of the ball whose measure equals that of {u > 0}."""
    d = u.grid.dims
    if d not in (2, 3):
        raise ShapeError(f"interface radius needs a 2D or 3D field, got {d}D")
    area = u.grid.cell_volume * int(np.count_nonzero(u.values > 0))
    if area == 0:
        return InterfaceRadius(0.0, True)
    if d == 2:
        return InterfaceRadius(math.sqrt(area / math.pi), False)
    return InterfaceRadius((3 * area / (4 * math.pi)) ** (1 / 3), False)


def fh_energy(u: PhysicalField, epsilon: float, theta: float, theta_c: float) -> float:
    grid = u.grid
    v = np.clip(u.values, -1 + FH_CLAMP, 1 - FH_CLAMP)
    grad_sq = sum(inverse(g).values ** 2 for g in gradient(forward(u)))
    density = (
        0.5 * theta * (xlogy(1 + v, 1 + v) + xlogy(1 - v, 1 - v))
        - 0.5 * theta_c * v**2
        + 0.5 * epsilon**2 * grad_sq
    )
    return float(grid.cell_volume * np.sum(density))


def sup_norm(u: PhysicalField) -> float:
    return float(np.max(np.abs(u.values)))
