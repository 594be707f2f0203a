import argparse
from pathlib import Path

from src.adapters.serializers import homology_csv, to_json
from src.application.chain_service import dump_basis, enumerate_basis
from src.application.graph_service import BallMetric, girth_vertex
from src.application.homology_service import compute_homology
from src.application.morse import (build_f_matching, dump_critical_cells,
                                   dump_matching, morse_reduce_vertex)
from src.domain.models import Graph
from src.presentation.commands.common import (add_graph_argument,
                                              add_lmax_argument, emit,
                                              load_graph)
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "compute", parents=parents, help="magnitude homology table MH_{k,l} for l <= lmax"
    )
    add_graph_argument(parser)
    add_lmax_argument(parser)
    parser.add_argument("--per-vertex", action="store_true", help="add the MH^x breakdown")
    parser.add_argument("--torsion", action="store_true", help="add Smith normal form torsion")
    morse = parser.add_mutually_exclusive_group()
    morse.add_argument("--no-morse", dest="morse", action="store_const", const="off",
                       help="no matchings and no tree closed form; plain chain homology")
    morse.add_argument("--morse", dest="morse", choices=["auto", "on", "off"])
    parser.add_argument("--dump-dir", help="write bases, matchings and critical cells here")
    parser.set_defaults(handler=run, morse="auto")


def dump_vertex_complexes(g: Graph, lmax: int, directory: str):
    """One file per (vertex, length) for bases, and for f-matchings where gir_x >= 5."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    d = BallMetric(g, lmax)
    for x in range(g.n):
        girth_x = girth_vertex(g, x)
        for length in range(lmax + 1):
            lines = []
            for k in range(length + 1):
                lines.extend(f"{k}\t{t}" for t in dump_basis(enumerate_basis(g, k, length, d, start=x)))
            (root / f"basis_x{x}_l{length}.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
            if girth_x >= 5 and length >= 2:
                matching = build_f_matching(g, x, length, d, girth_x=girth_x)
                (root / f"matching_x{x}_l{length}.txt").write_text(
                    "\n".join(dump_matching(matching)) + "\n", encoding="utf-8"
                )
                reduced = morse_reduce_vertex(g, x, length, d, girth_x=girth_x)
                (root / f"critical_x{x}_l{length}.txt").write_text(
                    "\n".join(dump_critical_cells(reduced)) + "\n", encoding="utf-8"
                )
    logger.info(f"Dumped complexes for {g.n} vertices to {root}")


def run(args: argparse.Namespace) -> int:
    g = load_graph(args)
    logger.info(f"Computing homology of a graph with n={g.n}, #E={g.edge_count} to l={args.lmax}")
    table = compute_homology(
        g,
        args.lmax,
        per_vertex=args.per_vertex,
        torsion=args.torsion,
        use_morse=args.morse,
        workers=args.workers,
    )
    if args.dump_dir:
        dump_vertex_complexes(g, args.lmax, args.dump_dir)
    emit(to_json(table) if args.output_format == "json" else homology_csv(table))
    return 0
