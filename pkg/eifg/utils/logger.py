"""
Logger set-up and a timing decorator for commands and long runs.
"""
import asyncio
import logging
import sys
import time
from functools import wraps
from typing import Optional

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def _attach(logger: logging.Logger, handler: logging.Handler) -> None:
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    logger.addHandler(handler)


def setup_logger(
    name: str,
    log_level: int = logging.INFO,
    log_file: Optional[str] = None,
) -> logging.Logger:
    """
    Logger writing to stdout and, when ``log_file`` is set, to that file.

    Calling it again for the same name only updates the level.
    """
    logger = logging.getLogger(name)
    logger.setLevel(log_level)
    if logger.handlers:
        return logger

    _attach(logger, logging.StreamHandler(sys.stdout))
    if log_file:
        _attach(logger, logging.FileHandler(log_file, encoding="utf-8"))
    return logger


def log_execution_time(logger: logging.Logger, level: int = logging.INFO):
    """Log start, end and wall time of the decorated coroutine or function."""

    def decorator(func):
        from eifg.utils.formatter import get_readable_time

        name = func.__name__

        def done(started: float):
            elapsed = get_readable_time(time.perf_counter() - started)
            logger.log(level, f"Completed {name} in {elapsed}")

        if asyncio.iscoroutinefunction(func):

            @wraps(func)
            async def async_wrapper(*args, **kwargs):
                started = time.perf_counter()
                logger.log(level, f"Starting {name}")
                try:
                    result = await func(*args, **kwargs)
                except Exception as e:
                    logger.error(f"Error in {name}: {e}")
                    raise
                done(started)
                return result

            return async_wrapper

        @wraps(func)
        def sync_wrapper(*args, **kwargs):
            started = time.perf_counter()
            logger.log(level, f"Starting {name}")
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                logger.error(f"Error in {name}: {e}")
                raise
            done(started)
            return result

        return sync_wrapper

    return decorator
