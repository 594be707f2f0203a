import argparse

from src.adapters.serializers import to_json, verdict_csv
from src.application.homology_service import decide_diagonality
from src.presentation.commands.common import (add_graph_argument,
                                              add_lmax_argument, emit,
                                              load_graph)
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "diagonal",
        parents=parents,
        help="diagonality verdict with certificate (exit 0 diagonal, 1 non-diagonal, 2 unresolved)",
    )
    add_graph_argument(parser)
    add_lmax_argument(parser)
    parser.add_argument("--morse", choices=["auto", "on", "off"], default="auto")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    g = load_graph(args)
    verdict = decide_diagonality(g, args.lmax, use_morse=args.morse, workers=args.workers)
    logger.info(f"Verdict {verdict.label} by {verdict.certificate.describe()}")
    emit(to_json(verdict) if args.output_format == "json" else verdict_csv(verdict))
    return verdict.exit_code
