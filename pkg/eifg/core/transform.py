"""
Nodal <-> coefficient transforms, spectral differentiation and dealiasing.

Coefficients are normalized so that ``u_hat[k]`` is the coefficient of
``exp(i k~ . x)`` in the truncated series:

    u_hat[k] = (prod N_i)^-1 * sum_j u(x_j) exp(-i k~ . x_j)

Nonlinear terms are evaluated pseudospectrally: transform to nodes, apply the
pointwise map, transform back (trigonometric interpolation, I_N).
"""
from dataclasses import dataclass
from typing import List

import numpy as np
import scipy.fft

from eifg import FFT_WORKERS
from eifg.core.exceptions import ConfigError, NumericInputError, ShapeError, SymmetryViolationError
from eifg.core.grid import Grid

DEALIAS_RULES = ("none", "two_thirds")
RESIDUE_FACTOR = 10.0


@dataclass(frozen=True, eq=False)
class PhysicalField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise ShapeError(
                f"nodal tensor shape {self.values.shape} does not match grid {self.grid.shape}"
            )


@dataclass(frozen=True, eq=False)
class SpectralField:
    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != self.grid.shape:
            raise ShapeError(
                f"coefficient tensor shape {self.coeffs.shape} does not match grid {self.grid.shape}"
            )

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs.copy())


def _shift_phase(grid: Grid) -> np.ndarray:
    """exp(-i k~ . a); identity when every lower bound is zero."""
    phase = np.ones(grid.shape, dtype=complex)
    for axis, (a, k) in enumerate(zip(grid.domain.lower, grid.wavenumbers)):
        if a != 0.0:
            phase = phase * grid.broadcast(axis, np.exp(-1j * k * a))
    return phase


def forward(u: PhysicalField) -> SpectralField:
    values = np.asarray(u.values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise NumericInputError("nodal values contain NaN or Inf")
    coeffs = scipy.fft.fftn(values, norm="forward", workers=FFT_WORKERS)
    if any(u.grid.domain.lower):
        coeffs *= _shift_phase(u.grid)
    return SpectralField(u.grid, coeffs)


def inverse(u_hat: SpectralField) -> PhysicalField:
    coeffs = u_hat.coeffs
    if any(u_hat.grid.domain.lower):
        coeffs = coeffs * np.conj(_shift_phase(u_hat.grid))
    values = scipy.fft.ifftn(coeffs, norm="forward", workers=FFT_WORKERS)
    residue = float(np.max(np.abs(values.imag))) if values.size else 0.0
    # round-off in the sum is bounded by the l1 norm of the coefficients
    tolerance = RESIDUE_FACTOR * np.finfo(float).eps * max(
        float(np.sum(np.abs(u_hat.coeffs))), np.finfo(float).tiny
    ) * max(1.0, np.log2(u_hat.grid.n_nodes))
    if residue > tolerance:
        raise SymmetryViolationError(residue, tolerance)
    return PhysicalField(u_hat.grid, np.ascontiguousarray(values.real))


def derivative_multipliers(grid: Grid) -> List[np.ndarray]:
    """Per-axis ``i k~_i`` with the unpaired Nyquist mode zeroed."""
    multipliers = []
    for axis, (n, k) in enumerate(zip(grid.sizes, grid.wavenumbers)):
        ik = 1j * k.copy()
        ik[n // 2] = 0.0
        multipliers.append(grid.broadcast(axis, ik))
    return multipliers


def gradient(u_hat: SpectralField) -> List[SpectralField]:
    return [
        SpectralField(u_hat.grid, ik * u_hat.coeffs)
        for ik in derivative_multipliers(u_hat.grid)
    ]


def dealias_mask(grid: Grid) -> np.ndarray:
    """True where a mode survives the two-thirds rule (|k_i| <= N_i/3 on every axis)."""
    mask = np.ones(grid.shape, dtype=bool)
    for axis, (n, k) in enumerate(zip(grid.sizes, grid.indices)):
        mask &= grid.broadcast(axis, 3 * np.abs(k) <= n)
    return mask


def dealias(u_hat: SpectralField, rule: str = "none") -> SpectralField:
    if rule == "none":
        return u_hat.copy()
    if rule == "two_thirds":
        return SpectralField(u_hat.grid, np.where(dealias_mask(u_hat.grid), u_hat.coeffs, 0.0))
    raise ConfigError(f"unknown dealias rule {rule!r}; expected one of {DEALIAS_RULES}")


def project(u_hat: SpectralField, grid: Grid) -> SpectralField:
    """
    Move coefficients onto another resolution of the same domain.

    Modes present on both index sets are copied, the rest are zero
    (truncation when coarsening, zero padding when refining). On an axis whose
    size changes the unpaired Nyquist mode is dropped so real fields stay real.
    """
    if grid.domain != u_hat.grid.domain:
        raise ShapeError("projection requires both grids to share a domain")
    out = np.zeros(grid.shape, dtype=complex)
    src_axes, dst_axes = [], []
    for n_src, n_dst in zip(u_hat.grid.sizes, grid.sizes):
        half = min(n_src, n_dst) // 2
        lowest = -half if n_src == n_dst else -half + 1
        keep = np.r_[0:half, lowest:0]
        src_axes.append(np.mod(keep, n_src))
        dst_axes.append(np.mod(keep, n_dst))
    out[np.ix_(*dst_axes)] = u_hat.coeffs[np.ix_(*src_axes)]
    return SpectralField(grid, out)
