import argparse
import sys
from typing import List, Optional

from pydantic import ValidationError

from src.config import settings
from src.domain.exceptions import (ArgumentError, DomainError,
                                   GraphParseError, GraphValidationError,
                                   OracleMismatch, PreconditionError)
from src.domain.value_objects import CliConfig
from src.presentation.commands import (compute, diagonal, er, girth,
                                       magnitude, verify)
from src.presentation.commands.common import common_options
from src.utils.error_handlers import ErrorHandlers
from src.utils.logging_config import get_logger, setup_logging

logger = get_logger(__name__)


class MaghomArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with 64 and a JSON error line."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        ErrorHandlers.handle_invalid_usage(ArgumentError(message))


def build_parser() -> argparse.ArgumentParser:
    parser = MaghomArgumentParser(
        prog=settings.PROJECT_NAME,
        description="Magnitude homology of graphs, girth matchings and random-graph experiments",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    parents = [common_options()]
    for command in (compute, girth, diagonal, magnitude, er, verify):
        command.register(subparsers, parents)
    return parser


def cli_config(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        subcommand=args.command,
        mode=getattr(args, "mode", None),
        graph=getattr(args, "graph", None),
        lmax=getattr(args, "lmax", settings.DEFAULT_LMAX),
        output_format=args.output_format,
        seed=getattr(args, "seed", settings.DEFAULT_SEED),
        trials=getattr(args, "trials", 1),
        n_grid=getattr(args, "n", None),
        c_grid=er.parse_grid(getattr(args, "c", None)),
        p_grid=er.parse_grid(getattr(args, "p", None)),
        workers=args.workers,
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level, settings.LOG_DIR)

    logger.info(f"Running {args.command}")
    try:
        cli_config(args)
        return args.handler(args)
    except (GraphParseError, GraphValidationError) as e:
        ErrorHandlers.handle_invalid_graph(e)
    except (ArgumentError, DomainError, PreconditionError, ValidationError) as e:
        logger.error(f"Invalid usage: {e}")
        ErrorHandlers.handle_invalid_usage(e)
    except OracleMismatch as e:
        logger.error(f"Oracle mismatch: {e}")
        ErrorHandlers.handle_oracle_mismatch(e)
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        ErrorHandlers.handle_input_error(e)
    except Exception as e:
        logger.error(f"Error running {args.command}: {e}", exc_info=True)
        ErrorHandlers.handle_internal_error(e)
