import asyncio
import logging
from pathlib import Path
from typing import Dict, List, Optional

from eifg import SNAPSHOT_STRIDE
from eifg.core.diagnostics import fh_energy, interface_radius, sup_norm
from eifg.core.exceptions import BlowUpError, ConfigError
from eifg.core.integrators import State
from eifg.core.problems import mcf_limit_radius
from eifg.core.sections import section
from eifg.core.transform import inverse
from eifg.utils.files import ensure_writable, write_csv, write_snapshot, write_text
from eifg.utils.formatter import format_cell
from eifg.utils.functions import output_dir, resolve_problem, run_resolution
from eifg.utils.logger import log_execution_time
from eifg.utils.runconfig import RunConfig

__MODULE__ = "Simulate"
__HELP__ = """
Run a single configuration and record its trajectory.

snapshot_stride     write snapshot_XXXXXX.eifg every this many steps
                    (0: only the final state)
diagnostics_stride  add a diagnostics.csv row every this many steps

diagnostics.csv holds t and sup_norm, plus energy for the Flory-Huggins
problem and radius, R_lim for mean curvature flow. A blow-up leaves the
files written so far and a FAILED marker.
"""

log = logging.getLogger(__name__)

FAILED_MARKER = "FAILED"
DIAGNOSTICS_FILE = "diagnostics.csv"


def snapshot_name(step: int) -> str:
    return f"snapshot_{step:06d}.eifg"


def diagnostics_header(capabilities) -> List[str]:
    header = ["t", "sup_norm"]
    if "energy" in capabilities:
        header.append("energy")
    if "radius" in capabilities:
        header += ["radius", "R_lim"]
    return header


@log_execution_time(log)
async def cmd_simulate(
    config: RunConfig,
    out: Optional[str] = None,
    jobs: Optional[int] = None,
) -> Dict[str, object]:
    if config.mode != "single":
        raise ConfigError("simulate takes a single grid and a single step count")
    problem = resolve_problem(config)
    directory = ensure_writable(output_dir(config, out))
    (sizes, n_steps), = config.resolutions()
    snapshot_stride = (
        config.snapshot_stride if config.snapshot_stride is not None else SNAPSHOT_STRIDE
    )
    diagnostics_stride = config.diagnostics_stride
    params = problem.params
    loop = asyncio.get_running_loop()
    pending = []
    rows: List[List[str]] = []

    log.info(
        section(
            "Simulation",
            body={
                "problem": problem.name,
                "scheme": config.scheme,
                "grid": "x".join(map(str, sizes)),
                "steps": n_steps,
                "T": config.T,
                "output": directory,
            },
        )
    )

    def observe(step: int, t: float, state: State):
        final = step == n_steps
        u = None
        if final or (snapshot_stride and step % snapshot_stride == 0):
            u = inverse(state.field)
            pending.append(
                asyncio.run_coroutine_threadsafe(
                    write_snapshot(Path(directory) / snapshot_name(step), u.values, t), loop
                )
            )
        if final or step % diagnostics_stride == 0:
            u = u if u is not None else inverse(state.field)
            row = [format_cell(t), format_cell(sup_norm(u))]
            if "energy" in problem.capabilities:
                row.append(
                    format_cell(
                        fh_energy(u, params["epsilon"], params["theta"], params["theta_c"])
                    )
                )
            if "radius" in problem.capabilities:
                row += [
                    format_cell(interface_radius(u).radius),
                    format_cell(mcf_limit_radius(t, params["d"], params["radius"])),
                ]
            rows.append(row)

    async def flush():
        for future in pending:
            await asyncio.wrap_future(future)
        await write_csv(
            Path(directory) / DIAGNOSTICS_FILE,
            diagnostics_header(problem.capabilities),
            rows,
        )

    try:
        result = await asyncio.to_thread(
            run_resolution, config, problem, sizes, n_steps, (observe,)
        )
    except BlowUpError as err:
        await flush()
        await write_text(Path(directory) / FAILED_MARKER, f"{err}\n")
        log.error(f"Simulation of {problem.name} failed, partial output in {directory}")
        raise
    await flush()
    log.info(f"Wrote {len(pending)} snapshot(s) and {len(rows)} diagnostics row(s) to {directory}")
    return {
        "directory": directory,
        "snapshots": len(pending),
        "rows": len(rows),
        "time": result.state.time,
        "sec_per_step": result.sec_per_step,
    }
