import asyncio
import threading
import time

import pytest

from eifg.core.sections import section
from eifg.core.tasks import run_sweep, tasks, tasks_text


def test_results_keep_input_order():
    def work(n):
        time.sleep(0.01 * (5 - n))
        return n * n

    assert asyncio.run(run_sweep(work, [1, 2, 3, 4], jobs=3)) == [1, 4, 9, 16]
    assert not tasks


def test_jobs_cap_concurrency():
    lock = threading.Lock()
    running = [0]
    peak = [0]

    def work(n):
        with lock:
            running[0] += 1
            peak[0] = max(peak[0], running[0])
        time.sleep(0.02)
        with lock:
            running[0] -= 1
        return n

    asyncio.run(run_sweep(work, range(6), jobs=2))
    assert peak[0] <= 2


def test_failure_propagates():
    def work(n):
        if n == 1:
            raise ValueError("boom")
        return n

    with pytest.raises(ValueError, match="boom"):
        asyncio.run(run_sweep(work, [0, 1, 2], jobs=1))
    assert not tasks


def test_tasks_text_without_tasks():
    assert asyncio.run(tasks_text()) == "No pending task"


def test_section():
    text = section("Run", {"problem": "heat", "sizes": [8, 8], "skipped": None})
    assert text == "Run:\n  problem: heat\n  sizes: 8, 8\n"
