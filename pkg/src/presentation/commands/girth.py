import argparse

from src.adapters.serializers import girth_csv, to_json
from src.application.graph_service import girth_report
from src.presentation.commands.common import add_graph_argument, emit, load_graph


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "girth", parents=parents, help="global, per-vertex and per-edge girth"
    )
    add_graph_argument(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    report = girth_report(load_graph(args))
    emit(to_json(report) if args.output_format == "json" else girth_csv(report))
    return 0
