import asyncio
import logging
import math
import os
import time
from pathlib import Path
from typing import List, Optional

import psutil

from eifg import start_time
from eifg.core.exceptions import ConfigError
from eifg.core.sections import section
from eifg.utils.files import ensure_writable, write_csv
from eifg.utils.formatter import format_cell, get_readable_time
from eifg.utils.functions import RunResult, output_dir, resolve_problem, run_resolution
from eifg.utils.logger import log_execution_time
from eifg.utils.runconfig import RunConfig

__MODULE__ = "Bench"
__HELP__ = """
Time one step of the solver across a spatial sweep.

growth = log(sec_per_step ratio) / log(node count ratio) between consecutive
grids; 1 means cost linear in the number of nodes. Runs are sequential
whatever --jobs says. Writes bench.csv into the output directory.
"""

log = logging.getLogger(__name__)


def host_stats() -> str:
    process = psutil.Process(os.getpid())
    return section(
        "Host",
        body={
            "Uptime": get_readable_time(time.time() - start_time),
            "CPUs": f"{psutil.cpu_count(logical=False)} physical / {psutil.cpu_count()} logical",
            "CPU": f"{psutil.cpu_percent()}%",
            "RAM": f"{psutil.virtual_memory().percent}%",
            "Process": f"{round(process.memory_info()[0] / 1024 ** 2)} MB",
        },
    )


def growth_factors(results: List[RunResult]) -> List[Optional[float]]:
    factors: List[Optional[float]] = [None]
    for coarse, fine in zip(results, results[1:]):
        nodes = fine.grid.n_nodes / coarse.grid.n_nodes
        if coarse.sec_per_step > 0 and fine.sec_per_step > 0 and nodes > 1:
            factors.append(math.log(fine.sec_per_step / coarse.sec_per_step) / math.log(nodes))
        else:
            factors.append(None)
    return factors


@log_execution_time(log)
async def cmd_bench(
    config: RunConfig,
    out: Optional[str] = None,
    jobs: Optional[int] = None,
) -> List[Optional[float]]:
    if config.mode == "temporal":
        raise ConfigError("bench sweeps grid sizes, not step counts")
    problem = resolve_problem(config)
    directory = ensure_writable(output_dir(config, out))
    if jobs and jobs > 1:
        log.info("bench ignores --jobs, timings are taken one run at a time")
    log.info(host_stats())

    results = []
    for sizes, n_steps in config.resolutions():
        results.append(await asyncio.to_thread(run_resolution, config, problem, sizes, n_steps))
    factors = growth_factors(results)

    dims = problem.domain.dims
    header = [f"N_{i + 1}" for i in range(dims)] + ["N_T", "nodes", "sec_per_step", "growth"]
    rows = [
        [str(n) for n in result.sizes]
        + [
            str(result.n_steps),
            str(result.grid.n_nodes),
            format_cell(result.sec_per_step),
            format_cell(factor),
        ]
        for result, factor in zip(results, factors)
    ]
    path = await write_csv(Path(directory) / "bench.csv", header, rows)
    log.info(f"Wrote {len(rows)} timing row(s) to {path}")
    log.info(host_stats())
    return factors
