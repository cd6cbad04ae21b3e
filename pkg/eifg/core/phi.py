"""
phi-functions and exponential Runge-Kutta tableaux.

    phi_0(z) = exp(z),    phi_{j+1}(z) = (phi_j(z) - 1/j!) / z

Only nonpositive real arguments occur (the diffusion symbol is nonnegative),
so everything here is real. Every tableau weight is a short linear combination
of ``phi_j(-c * tau * lambda)``; ``PhiCombo`` stores that recipe and
``eval_combo`` turns it into a tensor over the index set.
"""
import logging
from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Dict, Tuple, Union

import numpy as np

from eifg.core.exceptions import ConfigError, PhiDomainError, UnsupportedOrderError

log = logging.getLogger(__name__)

MAX_PHI_INDEX = 3
TAYLOR_RADIUS = 0.5
TAYLOR_TERMS = 30
TAYLOR_RTOL = 1e-18

ArrayLike = Union[float, np.ndarray]


def _phi_taylor(j: int, z: np.ndarray) -> np.ndarray:
    # sum_m z^m / (m + j)!
    term = np.full_like(z, 1.0 / factorial(j))
    total = term.copy()
    for m in range(1, TAYLOR_TERMS):
        term = term * z / (m + j)
        total += term
        if np.all(np.abs(term) <= TAYLOR_RTOL * np.abs(total)):
            break
    return total


def _phi_closed_form(j: int, z: np.ndarray) -> np.ndarray:
    if j == 0:
        return np.exp(z)
    value = np.expm1(z) / z
    for k in range(1, j):
        value = (value - 1.0 / factorial(k)) / z
    return value


def phi(j: int, z: ArrayLike) -> ArrayLike:
    """phi_j(z) for z <= 0, scalar or elementwise over an array."""
    if not isinstance(j, (int, np.integer)) or not 0 <= j <= MAX_PHI_INDEX:
        raise UnsupportedOrderError(f"phi_{j} is not supported (0 <= j <= {MAX_PHI_INDEX})")
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z_arr > 0):
        raise PhiDomainError("phi-functions are only evaluated for z <= 0")
    out = np.empty_like(z_arr)
    small = np.abs(z_arr) < TAYLOR_RADIUS
    if np.any(small):
        out[small] = _phi_taylor(j, z_arr[small])
    if not np.all(small):
        out[~small] = _phi_closed_form(j, z_arr[~small])
    if np.ndim(z) == 0:
        return float(out[0])
    return out.reshape(np.shape(z))


@dataclass(frozen=True)
class PhiTerm:
    coefficient: float
    index: int
    node_scale: float = 1.0

    def __post_init__(self):
        if not 0 <= self.index <= MAX_PHI_INDEX:
            raise UnsupportedOrderError(f"phi_{self.index} is not supported")
        if not 0 < self.node_scale <= 1:
            raise ConfigError(f"node scale {self.node_scale} outside (0, 1]")


@dataclass(frozen=True)
class PhiCombo:
    """sum of coefficient * phi_index(-node_scale * tau * lambda)."""

    terms: Tuple[PhiTerm, ...] = ()

    @classmethod
    def of(cls, *terms: Tuple[float, int, float]) -> "PhiCombo":
        return cls(tuple(PhiTerm(*t) for t in terms))

    def at_zero(self) -> float:
        return sum(t.coefficient / factorial(t.index) for t in self.terms)


def eval_combo(combo: PhiCombo, tau: float, symbol: np.ndarray) -> np.ndarray:
    if not tau > 0:
        raise ConfigError(f"time step must be positive, got {tau}")
    out = np.zeros(np.shape(symbol))
    evaluated: Dict[Tuple[int, float], np.ndarray] = {}
    for term in combo.terms:
        key = (term.index, term.node_scale)
        if key not in evaluated:
            evaluated[key] = phi(term.index, -term.node_scale * tau * np.asarray(symbol))
        out = out + term.coefficient * evaluated[key]
    return out


@dataclass(frozen=True)
class Tableau:
    name: str
    order: int
    nodes: Tuple[float, ...]
    # a[i][j] for j < i, row 0 empty
    a: Tuple[Tuple[PhiCombo, ...], ...]
    b: Tuple[PhiCombo, ...]
    params: Tuple[Tuple[str, float], ...] = field(default=())

    @property
    def stages(self) -> int:
        return len(self.nodes)

    def consistency_residuals(self) -> Dict[str, float]:
        """Residuals of sum_i b_i(0) = 1 and sum_j a_ij(0) = c_i."""
        residuals = {"b": abs(sum(b.at_zero() for b in self.b) - 1.0)}
        for i in range(1, self.stages):
            row = sum(combo.at_zero() for combo in self.a[i])
            residuals[f"a{i + 1}"] = abs(row - self.nodes[i])
        return residuals


def _eifg1() -> Tableau:
    return Tableau(
        name="eifg1",
        order=1,
        nodes=(0.0,),
        a=((),),
        b=(PhiCombo.of((1.0, 1, 1.0)),),
    )


def _eifg2(c2: float) -> Tableau:
    return Tableau(
        name="eifg2",
        order=2,
        nodes=(0.0, c2),
        a=((), (PhiCombo.of((c2, 1, c2)),)),
        b=(
            PhiCombo.of((1.0, 1, 1.0), (-1.0 / c2, 2, 1.0)),
            PhiCombo.of((1.0 / c2, 2, 1.0)),
        ),
        params=(("c2", c2),),
    )


def _eifg3() -> Tableau:
    half = 0.5
    return Tableau(
        name="eifg3",
        order=3,
        nodes=(0.0, half, half, 1.0),
        a=(
            (),
            (PhiCombo.of((0.5, 1, half)),),
            (
                PhiCombo.of((0.5, 1, half), (-1.0, 2, half)),
                PhiCombo.of((1.0, 2, half)),
            ),
            (
                PhiCombo.of((1.0, 1, 1.0), (-2.0, 2, 1.0)),
                PhiCombo(),
                PhiCombo.of((2.0, 2, 1.0)),
            ),
        ),
        b=(
            PhiCombo.of((1.0, 1, 1.0), (-3.0, 2, 1.0), (4.0, 3, 1.0)),
            PhiCombo.of((2.0, 2, 1.0), (-4.0, 3, 1.0)),
            PhiCombo.of((2.0, 2, 1.0), (-4.0, 3, 1.0)),
            PhiCombo.of((-1.0, 2, 1.0), (4.0, 3, 1.0)),
        ),
    )


SCHEMES: Dict[str, Callable[..., Tableau]] = {
    "eifg1": lambda c2: _eifg1(),
    "eifg2": _eifg2,
    "eifg3": lambda c2: _eifg3(),
}


def tableau(scheme: str, c2: float = 0.5) -> Tableau:
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {scheme!r}; expected one of {sorted(SCHEMES)}")
    if not 0 < c2 <= 1:
        raise ConfigError(f"c2 must lie in (0, 1], got {c2}")
    tab = SCHEMES[scheme](float(c2))
    log.debug(f"Using {tab.name}: {tab.stages} stage(s), order {tab.order}")
    return tab
