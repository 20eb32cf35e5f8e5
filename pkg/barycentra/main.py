"""Command-line entry point."""
import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from barycentra import __version__
from barycentra.cli import affine, builtins, check, faces, plonka, replica
from barycentra.core.config import settings
from barycentra.core.errors import InputError, StructureError

logger = logging.getLogger("barycentra")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="barycentra",
        description="Exact barycentric algebras: law checks, face lattices, replicas and Płonka sums",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  barycentra check builtin:t-algebra --laws barycentric --sampled 1000
  barycentra replica builtin:t-algebra --dot t.dot
  barycentra faces data/cube.json
  barycentra plonka eval data/t-presentation.json --p 1/2 --x 0:α --y 1:γ
  barycentra affine replica '{p:3,n:2}'
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help=f"Logging level (default {settings.log_level})")

    subparsers = parser.add_subparsers(dest="command", required=True)

    # Include subcommands
    check.register(subparsers)
    replica.register(subparsers)
    faces.register(subparsers)
    plonka.register(subparsers)
    affine.register(subparsers)
    builtins.register(subparsers)
    return parser


def configure_logging(level: Optional[str] = None) -> None:
    """Log to stderr through rich; stdout stays JSON only."""
    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _report_error(payload: dict) -> None:
    print(json.dumps(payload, ensure_ascii=False, indent=2))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)

    try:
        return args.handler(args)
    except InputError as exc:
        logger.error("%s", exc.message)
        _report_error(exc.to_dict())
        return EXIT_USAGE
    except ValidationError as exc:
        logger.error("Invalid input: %d validation error(s)", exc.error_count())
        _report_error(
            {
                "error": "ValidationError",
                "message": str(exc),
                "witness": {"fields": [".".join(str(part) for part in e["loc"]) for e in exc.errors()]},
            }
        )
        return EXIT_USAGE
    except StructureError as exc:
        logger.error("%s", exc.message)
        _report_error(exc.to_dict())
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
