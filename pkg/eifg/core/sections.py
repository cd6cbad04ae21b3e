"""
Plain-text blocks for log output:

    Run:
      problem: example1
      sizes: 32, 32, 32
"""
from typing import Any, Mapping

INDENT = "  "


def _value(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return ", ".join(map(str, value))
    return str(value)


def section(title: str, body: Mapping[str, Any]) -> str:
    """``title:`` followed by one indented ``key: value`` line per non-None entry."""
    lines = [f"{title}:"]
    lines += [f"{INDENT}{key}: {_value(value)}" for key, value in body.items() if value is not None]
    return "\n".join(lines) + "\n"
