"""
Periodic rectangular domain, uniform collocation grid and the diagonal
symbol of the (negative) Laplacian.

Wavenumbers are stored in the standard DFT layout
``(0, 1, ..., N/2-1, -N/2, ..., -1)`` so that coefficient tensors line up with
FFT output. The scaled wavenumber on axis i is ``2*pi*k_i / (b_i - a_i)``.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple

import numpy as np

from eifg.core.exceptions import InvalidSizeError, ParameterError, ShapeError

log = logging.getLogger(__name__)

MAX_DIMS = 3


@dataclass(frozen=True)
class DomainSpec:
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    diffusion: float = 1.0

    def __post_init__(self):
        lower = tuple(float(a) for a in self.lower)
        upper = tuple(float(b) for b in self.upper)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "diffusion", float(self.diffusion))
        if not 1 <= len(lower) <= MAX_DIMS:
            raise ShapeError(f"domain must have 1 to {MAX_DIMS} axes, got {len(lower)}")
        if len(lower) != len(upper):
            raise ShapeError("lower and upper bounds differ in length")
        for axis, (a, b) in enumerate(zip(lower, upper)):
            if not b > a:
                raise ParameterError(f"axis {axis}: upper bound {b} <= lower bound {a}")
        if not self.diffusion > 0:
            raise ParameterError(f"diffusion coefficient must be > 0, got {self.diffusion}")

    @classmethod
    def box(cls, lower: float, upper: float, dims: int, diffusion: float = 1.0) -> "DomainSpec":
        return cls((lower,) * dims, (upper,) * dims, diffusion)

    @property
    def dims(self) -> int:
        return len(self.lower)

    @property
    def lengths(self) -> Tuple[float, ...]:
        return tuple(b - a for a, b in zip(self.lower, self.upper))

    @property
    def volume(self) -> float:
        return float(np.prod(self.lengths))


@dataclass(frozen=True)
class Grid:
    domain: DomainSpec
    sizes: Tuple[int, ...]

    @property
    def dims(self) -> int:
        return self.domain.dims

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.sizes

    @property
    def n_nodes(self) -> int:
        return int(np.prod(self.sizes))

    @property
    def volume(self) -> float:
        return self.domain.volume

    @property
    def cell_volume(self) -> float:
        return float(np.prod([L / n for L, n in zip(self.domain.lengths, self.sizes)]))

    @cached_property
    def nodes(self) -> Tuple[np.ndarray, ...]:
        """Per-axis node coordinates ``a_i + j (b_i - a_i) / N_i``."""
        return tuple(
            a + np.arange(n) * (L / n)
            for a, L, n in zip(self.domain.lower, self.domain.lengths, self.sizes)
        )

    @cached_property
    def indices(self) -> Tuple[np.ndarray, ...]:
        """Per-axis integer wavenumbers in transform order."""
        return tuple(np.fft.fftfreq(n, d=1.0 / n).round().astype(np.int64) for n in self.sizes)

    @cached_property
    def wavenumbers(self) -> Tuple[np.ndarray, ...]:
        return tuple(
            2.0 * np.pi * k / L for k, L in zip(self.indices, self.domain.lengths)
        )

    def mesh(self) -> Tuple[np.ndarray, ...]:
        """Sparse, broadcastable node coordinates (``indexing='ij'``)."""
        return tuple(np.meshgrid(*self.nodes, indexing="ij", sparse=True))

    def broadcast(self, axis: int, values: np.ndarray) -> np.ndarray:
        """Reshape a per-axis vector so it broadcasts along ``axis``."""
        shape = [1] * self.dims
        shape[axis] = -1
        return np.reshape(values, shape)

    @cached_property
    def wavenumber_squared(self) -> np.ndarray:
        """|k~|^2 over the index set, without the diffusion coefficient."""
        k2 = np.zeros(self.sizes)
        for axis, k in enumerate(self.wavenumbers):
            k2 = k2 + self.broadcast(axis, k**2)
        k2.setflags(write=False)
        return k2

    def refine(self, factor: int = 2) -> "Grid":
        return build_grid(self.domain, [n * factor for n in self.sizes])


def build_grid(domain: DomainSpec, sizes: Sequence[int]) -> Grid:
    sizes = tuple(int(n) for n in sizes)
    if len(sizes) != domain.dims:
        raise ShapeError(
            f"{len(sizes)} grid sizes given for a {domain.dims}-dimensional domain"
        )
    for axis, n in enumerate(sizes):
        if n < 2 or n % 2:
            raise InvalidSizeError(f"axis {axis}: size {n} must be even and >= 2")
    grid = Grid(domain, sizes)
    log.debug(f"Built grid {'x'.join(map(str, sizes))} on {domain.lower}..{domain.upper}")
    return grid


def laplacian_symbol(grid: Grid) -> np.ndarray:
    """D * |k~|^2 on the index set; read-only, exactly zero at the zero mode."""
    symbol = grid.domain.diffusion * grid.wavenumber_squared
    symbol.setflags(write=False)
    return symbol


def max_symbol(grid: Grid) -> float:
    """Largest symbol entry, reached at the Nyquist index on every axis."""
    return grid.domain.diffusion * sum(
        (np.pi * n / L) ** 2 for n, L in zip(grid.sizes, grid.domain.lengths)
    )
