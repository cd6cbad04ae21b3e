import argparse
import importlib
import sys
from typing import Optional, Sequence

import uvloop

from eifg import __version__, log
from eifg.core.decorators.errors import capture_err
from eifg.modules import ALL_MODULES
from eifg.utils.runconfig import RunConfig

COMMANDS = {}


def load_commands():
    for module_name in ALL_MODULES:
        imported_module = importlib.import_module(f"eifg.modules.{module_name}")
        if not getattr(imported_module, "__MODULE__", None):
            log.warning(f"{module_name} is missing __MODULE__, skipped")
            continue
        command = getattr(imported_module, f"cmd_{module_name}", None)
        if command is None:
            log.warning(f"{module_name} has no cmd_{module_name}, skipped")
            continue
        COMMANDS[imported_module.__MODULE__.lower()] = imported_module
    return COMMANDS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eifg",
        description="Exponential integrator Fourier Galerkin solver",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, module in sorted(COMMANDS.items()):
        cmd = sub.add_parser(
            name,
            help=module.__HELP__.strip().splitlines()[0],
            description=module.__HELP__,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        cmd.add_argument("--config", required=True, help="JSON run description")
        cmd.add_argument("--jobs", type=int, default=None, help="parallel sweep entries")
        cmd.add_argument("--out", default=None, help="output directory")
    return parser


@capture_err
async def dispatch(args: argparse.Namespace):
    config = RunConfig.load(args.config)
    module = COMMANDS[args.command]
    command = getattr(module, f"cmd_{args.command}")
    return await command(config, out=args.out, jobs=args.jobs)


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_commands()
    args = build_parser().parse_args(argv)
    if args.jobs is not None and args.jobs < 1:
        log.error("--jobs must be >= 1")
        return 2
    code, _ = uvloop.run(dispatch(args))
    if code == 0:
        log.info(f"{args.command} finished")
    return code


if __name__ == "__main__":
    sys.exit(main())
