import argparse

from src.adapters.serializers import magnitude_csv, to_json
from src.application.homology_service import (assert_magnitude_agreement,
                                              compute_homology,
                                              magnitude_from_homology)
from src.presentation.commands.common import (add_graph_argument,
                                              add_lmax_argument, emit,
                                              load_graph)


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "magnitude", parents=parents, help="magnitude series coefficients up to lmax"
    )
    add_graph_argument(parser)
    add_lmax_argument(parser)
    parser.add_argument(
        "--oracle",
        action="store_true",
        help="also invert the similarity matrix over power series and require agreement",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    g = load_graph(args)
    table = compute_homology(g, args.lmax, workers=args.workers)
    if args.oracle:
        series = assert_magnitude_agreement(g, table)
    else:
        series = magnitude_from_homology(table)
    emit(to_json(series) if args.output_format == "json" else magnitude_csv(series))
    return 0
