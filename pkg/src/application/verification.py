"""Compare computed homology against the girth theorems, instance by instance."""

from typing import List, Optional

from src.application.graph_service import girth_report
from src.application.homology_service import (compute_homology,
                                              euler_characteristic_from_chains,
                                              rank_upper_bound)
from src.application.morse import h_depth
from src.domain.exceptions import ArgumentError
from src.domain.models import Graph, is_finite
from src.domain.value_objects import (HomologyTable, TheoremInstance,
                                      TheoremReport)
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def _instance(theorem: str, locus: str, k: int, length: int, expected, observed,
              passed: bool) -> TheoremInstance:
    return TheoremInstance(
        theorem=theorem,
        locus=locus,
        k=k,
        length=length,
        expected=str(expected),
        observed=str(observed),
        passed=passed,
    )


def verify_theorems(g: Graph, lmax: int, table: Optional[HomologyTable] = None) -> TheoremReport:
    """
    Check every applicable instance of the local and global girth theorems,
    the girth non-diagonality criterion, the Euler characteristic identity
    and the rank bound up to lmax.
    """
    if lmax < 0:
        raise ArgumentError(f"lmax must be non-negative, got {lmax}")
    if table is None:
        table = compute_homology(g, lmax, per_vertex=True, torsion=True, use_morse="off")
    if table.per_vertex is None:
        raise ArgumentError("verification needs a table with the per-vertex breakdown")
    lmax = min(lmax, table.lmax)
    lengths = [length for length in range(lmax + 1) if table.is_complete(length)]
    report = girth_report(g)
    out: List[TheoremInstance] = []

    for x in range(g.n):
        gx = report.vertex_girth[x]
        if gx < 5:
            continue
        for length in lengths:
            if length == 0:
                continue
            observed = table.vertex_rank(x, length, length)
            out.append(_instance("lpart", f"x={x}", length, length, g.degree(x), observed,
                                 observed == g.degree(x)))
            for j in range(1, h_depth(length, gx) + 1):
                observed = table.vertex_rank(x, length - j, length)
                out.append(_instance("otherpart", f"x={x}", length - j, length, 0, observed,
                                     observed == 0))

    if report.girth >= 5:
        for length in lengths:
            if length == 0:
                continue
            rank, torsion = table.rank(length, length), table.torsion(length, length)
            expected = 2 * g.edge_count
            out.append(_instance("corollary", "G", length, length, expected,
                                 f"{rank} {torsion}" if torsion else rank,
                                 rank == expected and not torsion))
            for j in range(1, h_depth(length, report.girth) + 1):
                rank, torsion = table.rank(length - j, length), table.torsion(length - j, length)
                out.append(_instance("corollary", "G", length - j, length, 0,
                                     f"{rank} {torsion}" if torsion else rank,
                                     rank == 0 and not torsion))

    seen = set()
    for e in report.edge_girth:
        k = e.girth
        if not is_finite(k) or k < 5 or k in seen:
            continue
        seen.add(k)
        length = (k + 1) // 2
        if length not in lengths:
            continue
        rank, torsion = table.rank(2, length), table.torsion(2, length)
        out.append(_instance("nondiag", f"e={e.u}-{e.v} gir_e={k}", 2, length, "nonzero",
                             f"{rank} {torsion}" if torsion else rank,
                             rank > 0 or bool(torsion)))

    chains = euler_characteristic_from_chains(g, lmax)
    for length in lengths:
        homology = sum((-1) ** k * table.rank(k, length) for k in range(length + 1))
        out.append(_instance("euler", "G", 0, length, chains[length], homology,
                             chains[length] == homology))

    worst = {}
    for e in table.per_vertex:
        if e.k >= 1 and e.length in lengths and e.rank > worst.get((e.k, e.length), (0, -1))[0]:
            worst[(e.k, e.length)] = (e.rank, e.vertex)
    for (k, length), (rank, x) in sorted(worst.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        bound = rank_upper_bound(k, length, g.max_degree)
        out.append(_instance("rank_bound", f"x={x}", k, length, f"<= {bound}", rank, rank <= bound))

    result = TheoremReport(lmax=lmax, instances=out)
    logger.info(
        f"Checked {len(out)} theorem instances to l={lmax}: {len(result.failures())} failures"
    )
    return result
