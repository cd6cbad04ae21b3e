"""
Named asyncio tasks for sweep entries.

Each resolution of a sweep runs as its own task; the CPU-bound integration is
pushed to a worker thread and a semaphore caps how many run at once.
"""
import asyncio
import itertools
import logging
from time import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

from eifg import log
from eifg.core.sections import section

T = TypeVar("T")

tasks: Dict[int, Tuple[asyncio.Task, int]] = {}
TASKS_LOCK = asyncio.Lock()
_ids = itertools.count()


async def add_task(func, task_name: str, *args, **kwargs) -> Tuple[asyncio.Task, int]:
    async with TASKS_LOCK:
        task_id = next(_ids)
        task = asyncio.create_task(func(*args, **kwargs), name=task_name)
        tasks[task_id] = task, int(time())
    return task, task_id


async def rm_task(task_id: Optional[int] = None) -> None:
    """Forget finished tasks; cancel and forget ``task_id`` if given."""
    async with TASKS_LOCK:
        for key in [k for k, (task, _) in tasks.items() if task.done()]:
            del tasks[key]
        entry = tasks.pop(task_id, None) if task_id is not None else None
        if entry is not None and not entry[0].done():
            entry[0].cancel()


async def tasks_text() -> str:
    await rm_task()
    if not tasks:
        return "No pending task"
    return "".join(
        section(
            f"Task {task_id}",
            body={
                "Name": task.get_name(),
                "Status": "done" if task.done() else "running",
                "Running since": f"{round(time() - started)}s",
            },
        )
        for task_id, (task, started) in tasks.items()
    )


async def run_sweep(
    func: Callable[..., T],
    items: Sequence,
    jobs: int = 1,
    name: str = "run",
) -> List[T]:
    """
    Call ``func(item)`` for every item in worker threads, at most ``jobs`` at
    a time. Results keep the order of ``items``; the first failure cancels
    the entries still waiting and is re-raised.
    """
    semaphore = asyncio.Semaphore(max(1, jobs))

    async def worker(item) -> T:
        async with semaphore:
            return await asyncio.to_thread(func, item)

    started = []
    for i, item in enumerate(items):
        started.append(await add_task(worker, f"{name}-{i}", item))
    if log.isEnabledFor(logging.DEBUG):
        log.debug(f"Scheduled {len(started)} {name} task(s) with {jobs} job(s)\n{await tasks_text()}")

    try:
        return list(await asyncio.gather(*(task for task, _ in started)))
    except BaseException:
        for _, task_id in started:
            await rm_task(task_id)
        raise
    finally:
        await rm_task()
