"""
Explicit exponential Runge-Kutta time stepping of the semi-discrete system

    u_hat' = -L u_hat + G(t, u_hat)

with L the diagonal symbol D |k~|^2. One step of an s-stage tableau:

    U_i   = exp(-c_i tau L) u_hat + tau * sum_{j<i} a_ij(-tau L) G_j
    G_j   = coefficients of f(t + c_j tau, U_j)
    u_hat <- exp(-tau L) u_hat + tau * sum_i b_i(-tau L) G_i
"""
import logging
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional, Tuple

import numpy as np

from eifg import BLOWUP_LIMIT
from eifg.core.exceptions import BlowUpError, ConfigError
from eifg.core.grid import Grid, laplacian_symbol
from eifg.core.phi import Tableau, eval_combo
from eifg.core.problems import Problem, reaction_spectrum
from eifg.core.transform import DEALIAS_RULES, PhysicalField, SpectralField, forward

log = logging.getLogger(__name__)

# a 128^3 EIFG3 plan holds about 250 MB of weights
PLAN_CACHE_SIZE = 4

Observer = Callable[[int, float, "State"], None]


@dataclass(frozen=True, eq=False)
class State:
    time: float
    field: SpectralField
    step: int = 0
    # monotonic seconds spent inside step() so far
    wall_seconds: float = 0.0

    @property
    def grid(self) -> Grid:
        return self.field.grid


@dataclass(frozen=True, eq=False)
class StepPlan:
    grid: Grid
    tableau: Tableau
    tau: float
    dealias: str
    stage_decay: Tuple[np.ndarray, ...]
    decay: np.ndarray
    # tau * a_ij(-tau L) and tau * b_i(-tau L)
    a: Tuple[Tuple[np.ndarray, ...], ...]
    b: Tuple[np.ndarray, ...]


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array)
    array.setflags(write=False)
    return array


@lru_cache(maxsize=PLAN_CACHE_SIZE)
def make_plan(grid: Grid, tableau: Tableau, tau: float, dealias: str = "none") -> StepPlan:
    if not tau > 0:
        raise ConfigError(f"time step must be positive, got {tau}")
    if dealias not in DEALIAS_RULES:
        raise ConfigError(f"unknown dealias rule {dealias!r}; expected one of {DEALIAS_RULES}")
    symbol = laplacian_symbol(grid)
    plan = StepPlan(
        grid=grid,
        tableau=tableau,
        tau=tau,
        dealias=dealias,
        stage_decay=tuple(_frozen(np.exp(-c * tau * symbol)) for c in tableau.nodes),
        decay=_frozen(np.exp(-tau * symbol)),
        a=tuple(
            tuple(_frozen(tau * eval_combo(combo, tau, symbol)) for combo in row)
            for row in tableau.a
        ),
        b=tuple(_frozen(tau * eval_combo(combo, tau, symbol)) for combo in tableau.b),
    )
    log.debug(
        f"Prepared {tableau.name} plan on {'x'.join(map(str, grid.sizes))} with tau={tau:.3e}"
    )
    return plan


class Workspace:
    """Stage arrays reused from one step to the next."""

    def __init__(self, plan: StepPlan):
        shape = (plan.tableau.stages,) + plan.grid.shape
        self.stages = np.empty(shape, dtype=complex)
        self.buffer = np.empty(plan.grid.shape, dtype=complex)

    def fits(self, plan: StepPlan) -> bool:
        return self.stages.shape == (plan.tableau.stages,) + plan.grid.shape


def _check_stage(values: np.ndarray, step: int, stage: int) -> None:
    peak = float(np.max(np.abs(values))) if values.size else 0.0
    if not np.isfinite(peak) or peak > BLOWUP_LIMIT:
        raise BlowUpError(step, peak, stage)


def step(
    state: State,
    plan: StepPlan,
    problem: Problem,
    workspace: Optional[Workspace] = None,
) -> State:
    if state.grid != plan.grid:
        raise ConfigError("state and step plan live on different grids")
    if workspace is None or not workspace.fits(plan):
        workspace = Workspace(plan)
    started = time.perf_counter()
    u_hat = state.field.coeffs
    tau = plan.tau
    stages = workspace.stages
    buffer = workspace.buffer
    linear = problem.is_linear

    if not linear:
        for i, c in enumerate(plan.tableau.nodes):
            if i == 0:
                stage = state.field
            else:
                np.multiply(plan.stage_decay[i], u_hat, out=buffer)
                for j, weight in enumerate(plan.a[i]):
                    buffer += weight * stages[j]
                _check_stage(buffer, state.step, i)
                stage = SpectralField(plan.grid, buffer)
            stages[i] = reaction_spectrum(
                problem, state.time + c * tau, stage, rule=plan.dealias
            ).coeffs

    new = plan.decay * u_hat
    if not linear:
        for i, weight in enumerate(plan.b):
            new += weight * stages[i]
    _check_stage(new, state.step, plan.tableau.stages)
    elapsed = time.perf_counter() - started
    return State(
        time=state.time + tau,
        field=SpectralField(plan.grid, new),
        step=state.step + 1,
        wall_seconds=state.wall_seconds + elapsed,
    )


def integrate(
    u0: PhysicalField,
    T: float,
    n_steps: int,
    tableau: Tableau,
    problem: Problem,
    callbacks: Iterable[Observer] = (),
    stride: int = 1,
    dealias: str = "none",
    t0: float = 0.0,
) -> State:
    """
    Advance ``u0`` from ``t0`` to ``t0 + T`` with ``n_steps`` uniform steps.

    Observers are called as ``callback(step, time, state)`` for the initial
    state, every ``stride`` steps and for the final state.
    """
    if not T > 0:
        raise ConfigError(f"final time must be positive, got {T}")
    if n_steps < 1:
        raise ConfigError(f"need at least one step, got {n_steps}")
    if stride < 1:
        raise ConfigError(f"observer stride must be >= 1, got {stride}")
    callbacks = tuple(callbacks)
    tau = T / n_steps
    plan = make_plan(u0.grid, tableau, tau, dealias)
    workspace = Workspace(plan)
    state = State(time=t0, field=forward(u0), step=0)

    def notify(current: State):
        for callback in callbacks:
            callback(current.step, current.time, current)

    notify(state)
    for n in range(n_steps):
        state = step(state, plan, problem, workspace)
        # uniform partition: t_n = t0 + n tau, exactly t0 + T at the end
        final = n + 1 == n_steps
        state = State(
            time=t0 + T if final else t0 + (n + 1) * tau,
            field=state.field,
            step=state.step,
            wall_seconds=state.wall_seconds,
        )
        if final or state.step % stride == 0:
            notify(state)
    log.debug(
        f"Integrated {problem.name} to t={state.time:g} in {n_steps} steps "
        f"({state.wall_seconds / n_steps:.3e} s/step)"
    )
    return state
