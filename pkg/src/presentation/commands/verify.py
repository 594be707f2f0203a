import argparse
import sys

from src.adapters.serializers import theorem_csv, to_json
from src.application.random_graphs import sample_bounded_girth, trial_rng
from src.application.verification import verify_theorems
from src.config import settings
from src.domain.exceptions import ArgumentError
from src.domain.value_objects import TheoremReport
from src.presentation.commands.common import add_lmax_argument, emit, load_graph
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "verify", parents=parents, help="check the girth theorems on a graph or on random graphs"
    )
    parser.add_argument("graph", nargs="?", help="edge-list file, or '-' for standard input")
    parser.add_argument("--random", type=int, metavar="N",
                        help="verify random graphs on N vertices with max degree 3 and girth >= 5")
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    add_lmax_argument(parser, default=4)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    if (args.graph is None) == (args.random is None):
        raise ArgumentError("give exactly one of a graph file and --random N")
    if args.graph is not None:
        report = verify_theorems(load_graph(args), args.lmax)
    else:
        if args.random < 1 or args.trials < 1:
            raise ArgumentError("--random and --trials must be positive")
        instances = []
        for trial in range(args.trials):
            g = sample_bounded_girth(args.random, 3, 5, trial_rng(args.seed, trial))
            for instance in verify_theorems(g, args.lmax).instances:
                instances.append(instance.model_copy(update={"locus": f"trial {trial}: {instance.locus}"}))
        report = TheoremReport(lmax=args.lmax, instances=instances)

    emit(to_json(report) if args.output_format == "json" else theorem_csv(report))
    if not report.passed:
        for failure in report.failures():
            print(
                f"FAILED {failure.theorem} at {failure.locus} ({failure.k},{failure.length}): "
                f"expected {failure.expected}, observed {failure.observed}",
                file=sys.stderr,
            )
        return 1
    return 0
