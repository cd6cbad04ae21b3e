"""Command modules; every ``*.py`` here except this file is one subcommand."""
from pathlib import Path

from eifg import log


def __list_all_modules():
    names = [
        path.stem
        for path in Path(__file__).parent.glob("*.py")
        if path.is_file() and path.stem not in ("__init__", "__main__")
    ]
    log.debug(f"Found {len(names)} command modules: {', '.join(sorted(names))}")
    return names


ALL_MODULES = sorted(__list_all_modules())
__all__ = ALL_MODULES + ["ALL_MODULES"]
