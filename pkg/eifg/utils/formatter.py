import math
from typing import Optional

from eifg import CSV_FLOAT_FORMAT


def get_readable_time(seconds: float) -> str:
    """``1.23s`` below a minute, else ``[Nd, ]h:m:s`` without leading zero units."""
    if seconds < 60:
        return f"{seconds:.2f}s"
    minutes, secs = divmod(int(seconds), 60)
    hours, minutes = divmod(minutes, 60)
    days, hours = divmod(hours, 24)
    parts = [(hours, "h"), (minutes, "m"), (secs, "s")]
    while parts and parts[0][0] == 0:
        parts.pop(0)
    readable = ":".join(f"{value}{unit}" for value, unit in parts)
    return f"{days}days, {readable}" if days else readable


def format_cell(value: Optional[float], fmt: str = CSV_FLOAT_FORMAT) -> str:
    """CSV cell for a real number; None and non-finite values become empty."""
    if value is None:
        return ""
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    value = float(value)
    if not math.isfinite(value):
        return ""
    return fmt % value
