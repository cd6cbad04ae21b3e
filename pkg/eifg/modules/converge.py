import logging
from pathlib import Path
from typing import Optional

from eifg import JOBS
from eifg.core.diagnostics import RateTable, rates, solution_errors
from eifg.core.exceptions import ConfigError
from eifg.core.problems import exact_field
from eifg.core.sections import section
from eifg.core.tasks import run_sweep
from eifg.utils.files import ensure_writable, write_csv
from eifg.utils.functions import (
    converge_header,
    converge_rows,
    error_record,
    final_radius,
    output_dir,
    resolve_problem,
    run_resolution,
)
from eifg.utils.logger import log_execution_time
from eifg.utils.runconfig import RunConfig

__MODULE__ = "Converge"
__HELP__ = """
Run every resolution of a spatial or temporal sweep and tabulate the errors
in L2, H1 and H2 with observed convergence rates.

reference=exact   compare with the closed-form solution at the nodes
reference=finest  compare with the finest run of the sweep (left out of the rows)

Writes converge.csv into the output directory.
"""

log = logging.getLogger(__name__)


@log_execution_time(log)
async def cmd_converge(
    config: RunConfig,
    out: Optional[str] = None,
    jobs: Optional[int] = None,
) -> RateTable:
    problem = resolve_problem(config)
    if config.reference == "exact" and problem.exact is None:
        raise ConfigError(
            f"problem {problem.name!r} has no exact solution; use reference=finest"
        )
    resolutions = config.resolutions()
    if config.reference == "finest" and len(resolutions) < 2:
        raise ConfigError("reference=finest needs at least two resolutions")
    directory = ensure_writable(output_dir(config, out))
    with_radius = "radius" in problem.capabilities

    log.info(
        section(
            "Convergence study",
            body={
                "problem": problem.name,
                "scheme": config.scheme,
                "mode": config.mode,
                "reference": config.reference,
                "resolutions": [f"{'x'.join(map(str, s))}/{n}" for s, n in resolutions],
            },
        )
    )
    results = await run_sweep(
        lambda item: run_resolution(config, problem, *item),
        resolutions,
        jobs=jobs or JOBS,
        name=f"converge-{problem.name}",
    )

    records = []
    if config.reference == "exact":
        for result in results:
            reference = exact_field(problem, result.grid, result.state.time)
            records.append(error_record(result, solution_errors(result.state.field, reference)))
    else:
        finest, results = results[-1], results[:-1]
        finest_radius = final_radius(finest) if with_radius else None
        for result in results:
            radius_error = (
                abs(final_radius(result) - finest_radius) if with_radius else None
            )
            records.append(
                error_record(
                    result,
                    solution_errors(result.state.field, finest.state.field),
                    radius_error,
                )
            )

    table = rates(records)
    dims = problem.domain.dims
    path = await write_csv(
        Path(directory) / "converge.csv",
        converge_header(dims, with_radius),
        converge_rows(table, with_radius),
    )
    log.info(f"Wrote {len(records)} row(s) to {path}")
    return table
