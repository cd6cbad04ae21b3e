"""
Reaction terms, initial data and exact solutions.

A problem describes ``u_t = D lap(u) + f(t, u, grad u)`` on a periodic box.
``f`` is split into a pointwise part ``reaction(t, u, grad_u, coords)``
evaluated at the nodes, an optional conservative part ``-div F(t, u)``
whose divergence is taken spectrally, and an optional known forcing
``forcing_time(t) * forcing(coords)`` that does not depend on ``u``.

The forcing is projected rather than interpolated: its coefficients come from
a finer sampling truncated to the grid's index set.
"""
import inspect
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from eifg.core.exceptions import ConfigError, ParameterError, ProblemEvaluationError
from eifg.core.grid import DomainSpec, Grid
from eifg.core.transform import (
    PhysicalField,
    SpectralField,
    dealias,
    derivative_multipliers,
    forward,
    gradient,
    inverse,
    project,
)

log = logging.getLogger(__name__)

Coords = Tuple[np.ndarray, ...]
Reaction = Callable[[float, np.ndarray, Optional[Sequence[np.ndarray]], Coords], np.ndarray]
Flux = Callable[[float, np.ndarray, Coords], Sequence[Optional[np.ndarray]]]

FH_CLAMP = 1e-12
FORCING_OVERSAMPLE = 4
FORCING_MAX_NODES = 2**24


def _constant_in_time(t: float) -> float:
    return 1.0


@dataclass(frozen=True, eq=False)
class Problem:
    name: str
    domain: DomainSpec
    reaction: Optional[Reaction] = None
    gradient_dependent: bool = False
    flux: Optional[Flux] = None
    forcing: Optional[Callable[[Coords], np.ndarray]] = None
    forcing_time: Callable[[float], float] = _constant_in_time
    exact: Optional[Callable[[float, Coords], np.ndarray]] = None
    initial: Optional[Callable[[Coords], np.ndarray]] = None
    params: Mapping[str, float] = field(default_factory=dict)
    capabilities: FrozenSet[str] = frozenset()

    @property
    def needs_nodal_gradient(self) -> bool:
        # conservative problems take their derivatives spectrally
        return self.gradient_dependent and self.flux is None

    @property
    def is_linear(self) -> bool:
        return self.reaction is None and self.flux is None and self.forcing is None

    def source(self, t: float, coords: Coords) -> np.ndarray:
        """Nodal values of the forcing at time ``t``; zero without one."""
        if self.forcing is None:
            return np.zeros(())
        return self.forcing_time(t) * self.forcing(coords)


def _full(values, grid: Grid) -> np.ndarray:
    return np.ascontiguousarray(np.broadcast_to(np.asarray(values, dtype=float), grid.shape))


def initial_field(problem: Problem, grid: Grid) -> PhysicalField:
    coords = grid.mesh()
    if problem.initial is not None:
        values = problem.initial(coords)
    elif problem.exact is not None:
        values = problem.exact(0.0, coords)
    else:
        raise ConfigError(f"problem {problem.name!r} has no initial condition")
    return PhysicalField(grid, _full(values, grid))


def exact_field(problem: Problem, grid: Grid, t: float) -> PhysicalField:
    if problem.exact is None:
        raise ConfigError(f"problem {problem.name!r} has no exact solution")
    return PhysicalField(grid, _full(problem.exact(t, grid.mesh()), grid))


def _checked(problem: Problem, values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise ProblemEvaluationError(problem.name, f"{what} produced non-finite values")
    return values


def oversample_factor(grid: Grid) -> int:
    factor = FORCING_OVERSAMPLE
    while factor > 1 and grid.n_nodes * factor**grid.dims > FORCING_MAX_NODES:
        factor //= 2
    return factor


@lru_cache(maxsize=4)
def forcing_spectrum(problem: Problem, grid: Grid) -> SpectralField:
    """Truncated coefficients of the forcing profile on ``grid``; read-only."""
    if problem.forcing is None:
        raise ConfigError(f"problem {problem.name!r} has no forcing")
    fine = grid.refine(oversample_factor(grid))
    values = _checked(problem, _full(problem.forcing(fine.mesh()), fine), "forcing")
    coeffs = project(forward(PhysicalField(fine, values)), grid).coeffs
    coeffs.setflags(write=False)
    log.debug(f"Projected {problem.name} forcing from {'x'.join(map(str, fine.sizes))}")
    return SpectralField(grid, coeffs)


def reaction_spectrum(
    problem: Problem,
    t: float,
    u_hat: SpectralField,
    u: Optional[PhysicalField] = None,
    rule: str = "none",
) -> SpectralField:
    """Coefficients of f(t, u, grad u) for the coefficient field ``u_hat``."""
    grid = u_hat.grid
    coeffs = np.zeros(grid.shape, dtype=complex)
    if problem.is_linear:
        return SpectralField(grid, coeffs)
    if problem.reaction is not None or problem.flux is not None:
        u = u if u is not None else inverse(u_hat)
    coords = grid.mesh()
    if problem.reaction is not None:
        grad = None
        if problem.needs_nodal_gradient:
            grad = [inverse(g).values for g in gradient(u_hat)]
        g = _full(problem.reaction(t, u.values, grad, coords), grid)
        coeffs = forward(PhysicalField(grid, _checked(problem, g, "reaction"))).coeffs
    if problem.flux is not None:
        for ik, flux in zip(derivative_multipliers(grid), problem.flux(t, u.values, coords)):
            if flux is None:
                continue
            flux = _checked(problem, _full(flux, grid), "flux")
            coeffs = coeffs - ik * forward(PhysicalField(grid, flux)).coeffs
    if problem.forcing is not None:
        coeffs = coeffs + problem.forcing_time(t) * forcing_spectrum(problem, grid).coeffs
    result = SpectralField(grid, coeffs)
    if rule != "none":
        result = dealias(result, rule)
    return result


def eval_reaction(
    problem: Problem,
    t: float,
    u: PhysicalField,
    grad: Optional[Sequence[PhysicalField]] = None,
) -> PhysicalField:
    grid = u.grid
    if problem.needs_nodal_gradient and grad is None:
        raise ConfigError(f"problem {problem.name!r} needs the gradient of u")
    if problem.flux is not None:
        values = inverse(reaction_spectrum(problem, t, forward(u), u)).values
    else:
        values = _full(problem.source(t, grid.mesh()), grid)
        if problem.reaction is not None:
            grad_values = [g.values for g in grad] if problem.gradient_dependent else None
            values = values + problem.reaction(t, u.values, grad_values, grid.mesh())
    return PhysicalField(grid, _checked(problem, _full(values, grid), "reaction"))


# Example 1: forced reaction-diffusion with a manufactured solution


def _bump(s):
    return s**2 * (s - 1) ** 2 * np.sin(2 * np.pi * s)


def _bump_dd(s):
    w = 2 * np.pi
    p = s**2 * (s - 1) ** 2
    dp = 4 * s**3 - 6 * s**2 + 2 * s
    ddp = 12 * s**2 - 12 * s + 2
    return ddp * np.sin(w * s) + 2 * w * dp * np.cos(w * s) - w**2 * p * np.sin(w * s)


def _example1_exact(t, coords):
    value = np.exp(-t)
    for c in coords:
        value = value * _bump(c)
    return value


def _example1_profile(coords):
    # f = u_t - lap(u) + u = -lap(u) for u = exp(-t) prod X(x_i)
    lap = 0.0
    for axis in range(len(coords)):
        term = 1.0
        for other, c in enumerate(coords):
            term = term * (_bump_dd(c) if other == axis else _bump(c))
        lap = lap + term
    return -lap


def example1(dims: int = 3) -> Problem:
    if dims not in (1, 2, 3):
        raise ParameterError(f"example1 supports 1 to 3 dimensions, got {dims}")
    return Problem(
        name="example1",
        domain=DomainSpec.box(0.0, 1.0, dims),
        reaction=lambda t, u, grad, coords: -u,
        forcing=_example1_profile,
        forcing_time=lambda t: np.exp(-t),
        exact=_example1_exact,
        params={"dims": dims},
    )


# Example 2: Allen-Cahn approximation of mean curvature flow


def mcf_limit_radius(t: float, d: int = 2, radius: float = 0.4) -> float:
    """sqrt(R0^2 + 2 (1 - d) t), or 0 once the sphere has vanished."""
    return float(np.sqrt(max(radius**2 + 2 * (1 - d) * t, 0.0)))


def mcf_limit_volume(t: float, d: int = 2, radius: float = 0.4) -> float:
    if d == 2:
        return float(max(np.pi * (radius**2 - 2 * t), 0.0))
    if d == 3:
        base = max(radius**2 - 4 * t, 0.0)
        return float((4 * np.pi / 3) * base**1.5)
    raise ParameterError(f"limit volume defined for d in (2, 3), got {d}")


def example_mcf(epsilon: float = 0.075, d: int = 2, radius: float = 0.4) -> Problem:
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be > 0, got {epsilon}")
    if d not in (2, 3):
        raise ParameterError(f"mean curvature flow runs in 2 or 3 dimensions, got {d}")
    scale = np.sqrt(2.0) * epsilon

    def initial(coords):
        r = np.sqrt(sum(c**2 for c in coords))
        return np.tanh((radius - r) / scale)

    return Problem(
        name="mcf",
        domain=DomainSpec.box(-0.5, 0.5, d),
        reaction=lambda t, u, grad, coords: -(u**3 - u) / epsilon**2,
        initial=initial,
        params={"epsilon": epsilon, "d": d, "radius": radius},
        capabilities=frozenset({"radius"}),
    )


# Example 3: viscous Burgers in conservative form


def example_burgers(epsilon: float = 0.1, dims: int = 3) -> Problem:
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be > 0, got {epsilon}")
    if dims not in (1, 2, 3):
        raise ParameterError(f"burgers supports 1 to 3 dimensions, got {dims}")

    def exact(t, coords):
        decay = np.exp(-np.pi**2 * epsilon * t)
        x = coords[0]
        return 2 * epsilon * np.pi * decay * np.sin(np.pi * x) / (2 + decay * np.cos(np.pi * x))

    def flux(t, u, coords):
        return (0.5 * u * u,) + (None,) * (dims - 1)

    return Problem(
        name="burgers",
        domain=DomainSpec((0.0,) * dims, (2.0, 1.0, 1.0)[:dims], diffusion=epsilon),
        gradient_dependent=True,
        flux=flux,
        exact=exact,
        params={"epsilon": epsilon, "dims": dims},
    )


# Example 4: Allen-Cahn with the Flory-Huggins potential


def fh_reaction(u, theta: float, theta_c: float):
    u_c = np.clip(u, -1 + FH_CLAMP, 1 - FH_CLAMP)
    return 0.5 * theta * np.log((1 - u_c) / (1 + u_c)) + theta_c * u


def fh_maximum_bound(theta: float = 0.8, theta_c: float = 1.6) -> float:
    """Positive root of the Flory-Huggins reaction (the maximum bound gamma)."""
    if not theta_c > theta:
        raise ParameterError("a positive root requires theta_c > theta")
    return float(brentq(lambda s: fh_reaction(s, theta, theta_c), 1e-6, 1 - FH_CLAMP, xtol=1e-15))


def example_fh(
    epsilon: float = 0.1,
    theta: float = 0.8,
    theta_c: float = 1.6,
    *,
    seed: int,
    dims: int = 3,
) -> Problem:
    for key, value in (("epsilon", epsilon), ("theta", theta), ("theta_c", theta_c)):
        if not value > 0:
            raise ParameterError(f"{key} must be > 0, got {value}")
    if seed is None:
        raise ParameterError("the Flory-Huggins problem needs an explicit seed")

    def initial(coords):
        shape = np.broadcast_shapes(*(c.shape for c in coords))
        return np.random.default_rng(seed).uniform(-0.9, 0.9, size=shape)

    return Problem(
        name="fh",
        domain=DomainSpec.box(0.0, 1.0, dims, diffusion=epsilon**2),
        reaction=lambda t, u, grad, coords: fh_reaction(u, theta, theta_c),
        initial=initial,
        params={"epsilon": epsilon, "theta": theta, "theta_c": theta_c, "seed": seed},
        capabilities=frozenset({"energy"}),
    )


def heat(dims: int = 1, diffusion: float = 1.0) -> Problem:
    """Pure diffusion of sin(x_1) on [0, 2 pi]^d."""
    if dims not in (1, 2, 3):
        raise ParameterError(f"heat supports 1 to 3 dimensions, got {dims}")
    return Problem(
        name="heat",
        domain=DomainSpec.box(0.0, 2 * np.pi, dims, diffusion=diffusion),
        exact=lambda t, coords: np.exp(-diffusion * t) * np.sin(coords[0]),
        params={"dims": dims, "diffusion": diffusion},
    )


PROBLEMS: Dict[str, Callable[..., Problem]] = {
    "example1": example1,
    "mcf": example_mcf,
    "burgers": example_burgers,
    "fh": example_fh,
    "heat": heat,
}


def get_problem(name: str, params: Optional[Mapping] = None, seed: Optional[int] = None) -> Problem:
    if name not in PROBLEMS:
        raise ConfigError(f"unknown problem {name!r}; expected one of {sorted(PROBLEMS)}")
    factory = PROBLEMS[name]
    kwargs = dict(params or {})
    if "seed" in inspect.signature(factory).parameters:
        kwargs.setdefault("seed", seed)
    try:
        problem = factory(**kwargs)
    except TypeError as e:
        raise ConfigError(f"bad parameters for problem {name!r}: {e}") from e
    log.debug(f"Problem {name} with {problem.params}")
    return problem
