import argparse
import sys
from pathlib import Path
from typing import Optional

from src.adapters.graph_repository import read_graph
from src.config import settings
from src.domain.exceptions import GraphParseError, GraphValidationError
from src.domain.models import Graph
from src.utils.error_handlers import ErrorHandlers
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def common_options() -> argparse.ArgumentParser:
    """Options shared by every subcommand."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--format", dest="output_format", choices=["csv", "json"], default="csv")
    parent.add_argument("--workers", type=int, default=settings.WORKERS,
                        help="worker processes (default: MAGHOM_WORKERS or the CPU count)")
    parent.add_argument("--log-level", default=settings.LOG_LEVEL)
    parent.add_argument("--labels", action="store_true",
                        help="accept arbitrary vertex labels in the edge list")
    return parent


def add_graph_argument(parser: argparse.ArgumentParser):
    parser.add_argument("graph", help="edge-list file, or '-' for standard input")


def add_lmax_argument(parser: argparse.ArgumentParser, default: Optional[int] = None):
    parser.add_argument("--lmax", type=int, default=settings.DEFAULT_LMAX if default is None else default)


def load_graph(args: argparse.Namespace) -> Graph:
    try:
        return read_graph(args.graph, allow_labels=args.labels)
    except (GraphParseError, GraphValidationError) as e:
        logger.error(f"Invalid graph {args.graph}: {e}")
        ErrorHandlers.handle_invalid_graph(e)
    except OSError as e:
        logger.error(f"Could not read {args.graph}: {e}")
        ErrorHandlers.handle_input_error(e)


def emit(text: str, out: Optional[str] = None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
