"""
Helpers shared by the command modules: building a run from a RunConfig,
integrating one resolution and turning results into CSV rows.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from eifg import OUT_DIR
from eifg.core.diagnostics import ErrorRecord, RateTable, interface_radius
from eifg.core.exceptions import ShapeError
from eifg.core.grid import Grid, build_grid
from eifg.core.integrators import Observer, State, integrate
from eifg.core.phi import Tableau, tableau
from eifg.core.problems import Problem, get_problem, initial_field
from eifg.core.transform import inverse
from eifg.utils.formatter import format_cell
from eifg.utils.runconfig import RunConfig

log = logging.getLogger(__name__)


@dataclass
class RunResult:
    sizes: Tuple[int, ...]
    n_steps: int
    grid: Grid
    state: State

    @property
    def sec_per_step(self) -> float:
        return self.state.wall_seconds / self.n_steps


def resolve_problem(config: RunConfig) -> Problem:
    problem = get_problem(config.problem, config.params, config.seed)
    for sizes in config.grids:
        if len(sizes) != problem.domain.dims:
            raise ShapeError(
                f"problem {problem.name!r} lives in {problem.domain.dims}D, "
                f"got grid sizes {list(sizes)}"
            )
    return problem


def resolve_tableau(config: RunConfig) -> Tableau:
    return tableau(config.scheme, config.c2)


def output_dir(config: RunConfig, override: Optional[str] = None) -> Path:
    return Path(override or config.output_dir or OUT_DIR)


def run_resolution(
    config: RunConfig,
    problem: Problem,
    sizes: Sequence[int],
    n_steps: int,
    callbacks: Iterable[Observer] = (),
) -> RunResult:
    grid = build_grid(problem.domain, sizes)
    u0 = initial_field(problem, grid)
    log.info(f"Running {problem.name} on {'x'.join(map(str, grid.sizes))} with {n_steps} step(s)")
    state = integrate(
        u0,
        config.T,
        n_steps,
        resolve_tableau(config),
        problem,
        callbacks=callbacks,
        dealias=config.dealias,
    )
    result = RunResult(tuple(grid.sizes), n_steps, grid, state)
    log.info(
        f"Finished {'x'.join(map(str, grid.sizes))}/{n_steps}: "
        f"{result.sec_per_step:.3e} s/step"
    )
    return result


def final_radius(result: RunResult) -> float:
    return interface_radius(inverse(result.state.field)).radius


def converge_header(dims: int, with_radius: bool) -> List[str]:
    header = ["N_T"] + [f"N_{i + 1}" for i in range(dims)]
    header += ["e0", "CR0", "e1", "CR1", "e2", "CR2", "sec_per_step"]
    if with_radius:
        header += ["radius_err", "CRr"]
    return header


def converge_rows(table: RateTable, with_radius: bool) -> List[List[str]]:
    rows = []
    for record, rate, radius_rate in zip(table.records, table.rates, table.radius_rates):
        row = [str(record.n_steps)] + [str(n) for n in record.sizes]
        for error, cr in zip(record.errors, rate):
            row += [format_cell(error), format_cell(cr)]
        row.append(format_cell(record.sec_per_step))
        if with_radius:
            row += [format_cell(record.radius_error), format_cell(radius_rate)]
        rows.append(row)
    return rows


def error_record(result: RunResult, errors, radius_error: Optional[float] = None) -> ErrorRecord:
    return ErrorRecord(
        sizes=result.sizes,
        n_steps=result.n_steps,
        errors=tuple(errors),
        sec_per_step=result.sec_per_step,
        radius_error=radius_error,
    )
