import traceback
from functools import wraps

from eifg import log
from eifg.core.exceptions import BlowUpError, ConfigError

__all__ = ["EXIT_OK", "EXIT_FAILURE", "EXIT_CONFIG", "EXIT_BLOWUP", "EXIT_IO", "exit_code", "capture_err"]

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_IO = 4


def exit_code(err: BaseException) -> int:
    if isinstance(err, ConfigError):
        return EXIT_CONFIG
    if isinstance(err, BlowUpError):
        return EXIT_BLOWUP
    if isinstance(err, OSError):
        return EXIT_IO
    return EXIT_FAILURE


def capture_err(func):
    """
    Run a command coroutine and turn its outcome into a process exit code.

    The wrapped command returns whatever it produced on success; the wrapper
    returns ``(code, result)`` and never lets an exception escape except
    KeyboardInterrupt.
    """

    @wraps(func)
    async def capture(*args, **kwargs):
        try:
            return EXIT_OK, await func(*args, **kwargs)
        except Exception as err:
            code = exit_code(err)
            if code == EXIT_CONFIG:
                log.error(f"{func.__name__}: configuration error: {err}")
            else:
                log.error(
                    "**ERROR** | {} | exit {}\n{}".format(
                        func.__name__, code, "".join(traceback.format_exc())
                    )
                )
            return code, None

    return capture
