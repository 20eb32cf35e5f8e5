"""`list-builtins`: names and descriptions of the built-in models."""
import argparse

from barycentra.cli.deps import emit
from barycentra.services.builtins import builtin, list_builtins


def register(subparsers) -> None:
    parser = subparsers.add_parser("list-builtins", help="List the built-in models")
    parser.add_argument("--out", help="Write the JSON list to this file instead of stdout")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    emit(
        {"builtins": [{"name": name, "description": builtin(name).description} for name in list_builtins()]},
        args.out,
    )
    return 0
