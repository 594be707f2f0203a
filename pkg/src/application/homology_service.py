"""
Magnitude homology tables, the diagonality decision cascade and the
magnitude series computed both from homology and from the metric.
"""

from dataclasses import dataclass
from math import comb
from typing import Dict, List, Literal, Optional, Tuple

from src.application.chain_service import (boundary, build_complex,
                                           complex_homology, enumerate_basis,
                                           enumerate_generators)
from src.application.graph_service import (BallMetric, all_pairs_distances,
                                           components, girth_report,
                                           girth_vertex, induced_subgraph,
                                           is_complete, is_pawful,
                                           unique_cycle_length)
from src.application.linalg import SparseIntMatrix, homology_of_pair
from src.application.morse import morse_reduce_vertex
from src.application.series import TruncatedSeries, solve_series_system
from src.config import settings
from src.domain.exceptions import (ArgumentError, BudgetExceeded,
                                   ContractViolation, OracleMismatch)
from src.domain.models import ComponentDecomposition, Graph, is_finite
from src.domain.value_objects import (Certificate, ComponentVerdict,
                                      DiagonalityVerdict, HomologyEntry,
                                      HomologyTable, MagnitudeSeries,
                                      VertexHomologyEntry)
from src.infrastructure.workers import ordered_map
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

MorseMode = Literal["auto", "on", "off"]

Bidegree = Tuple[int, int]


def rank_upper_bound(k: int, length: int, max_degree: int) -> int:
    """binom(l-1, k-1) * max_degree^l, the bound on rank MH^x_{k,l}."""
    if k < 1 or length < 1:
        raise ArgumentError(f"bound needs k, l >= 1, got ({k}, {length})")
    if k > length:
        return 0
    return comb(length - 1, k - 1) * max_degree ** length


def _check_bound(rank: int, x: int, k: int, length: int, max_degree: int):
    if k >= 1 and length >= 1:
        bound = rank_upper_bound(k, length, max_degree)
        if rank > bound:
            raise ContractViolation(
                f"rank MH^{x}_({k},{length}) = {rank} exceeds the bound {bound}"
            )


@dataclass(frozen=True)
class VertexJob:
    graph: Graph
    vertex: int
    lmax: int
    torsion: bool
    use_morse: MorseMode
    budget: Optional[int]


@dataclass(frozen=True)
class VertexResult:
    ranks: Dict[Bidegree, Tuple[int, Tuple[int, ...]]]
    incomplete: Tuple[int, ...]
    morse_lengths: int


def _wants_morse(mode: MorseMode, girth_x, size: int) -> bool:
    if mode == "off" or girth_x < 5:
        return False
    return mode == "on" or size >= settings.MORSE_MIN_BASIS


def run_vertex_job(job: VertexJob) -> VertexResult:
    """Homology of MC^x_{*,l} for every l <= lmax at one start vertex."""
    g, x = job.graph, job.vertex
    d = BallMetric(g, job.lmax)
    girth_x = girth_vertex(g, x) if job.use_morse != "off" else None
    ranks: Dict[Bidegree, Tuple[int, Tuple[int, ...]]] = {}
    incomplete: Tuple[int, ...] = ()
    morse_lengths = 0
    for length in range(job.lmax + 1):
        try:
            cx = build_complex(g, d, length, x, budget=job.budget)
        except BudgetExceeded as e:
            logger.warning(f"Start vertex {x}, l={length}: {e}; lengths >= {length} left incomplete")
            incomplete = tuple(range(length, job.lmax + 1))
            break
        if girth_x is not None and length >= 2 and _wants_morse(job.use_morse, girth_x, cx.total_size):
            cx = morse_reduce_vertex(g, x, length, d, girth_x=girth_x, cx=cx)
            morse_lengths += 1
        for k in range(length + 1):
            rank, torsion = complex_homology(cx, k, torsion=job.torsion)
            _check_bound(rank, x, k, length, g.max_degree)
            if rank or torsion:
                ranks[(k, length)] = (rank, tuple(torsion))
    return VertexResult(ranks=ranks, incomplete=incomplete, morse_lengths=morse_lengths)


def compute_homology(g: Graph, lmax: int, per_vertex: bool = False, torsion: bool = False,
                     use_morse: MorseMode = "auto", workers: Optional[int] = 1,
                     budget: Optional[int] = None,
                     decomposition: Optional[ComponentDecomposition] = None) -> HomologyTable:
    """
    MH_{k,l}(G) for 0 <= k <= l <= lmax.

    Tree components use the closed form unless `use_morse` is "off"; every
    other component is split into one job per start vertex and the results
    are summed in vertex order.
    """
    if lmax < 0:
        raise ArgumentError(f"lmax must be non-negative, got {lmax}")
    if use_morse not in ("auto", "on", "off"):
        raise ArgumentError(f"unknown Morse mode {use_morse!r}")
    budget = settings.MAX_BASIS_SIZE if budget is None else budget
    decomposition = decomposition or components(g)

    totals: Dict[Bidegree, List[int]] = {}
    torsion_factors: Dict[Bidegree, List[int]] = {}
    vertex_rows: List[VertexHomologyEntry] = []

    def add(x: int, k: int, length: int, rank: int, factors=()):
        totals.setdefault((k, length), [0])[0] += rank
        if factors:
            torsion_factors.setdefault((k, length), []).extend(factors)
        if per_vertex and rank:
            vertex_rows.append(VertexHomologyEntry(vertex=x, k=k, length=length, rank=rank))

    jobs: List[VertexJob] = []
    origins: List[int] = []
    for cid in decomposition.ids:
        members = decomposition.members[cid]
        if use_morse != "off" and decomposition.is_tree(cid):
            for x in members:
                add(x, 0, 0, 1)
                for length in range(1, lmax + 1):
                    add(x, length, length, g.degree(x))
            continue
        sub, original = induced_subgraph(g, members)
        for local in range(sub.n):
            jobs.append(VertexJob(sub, local, lmax, torsion, use_morse, budget))
            origins.append(original[local])

    logger.debug(f"Homology to l={lmax}: {decomposition.count} components, {len(jobs)} vertex jobs")
    incomplete = set()
    for x, result in zip(origins, ordered_map(run_vertex_job, jobs, workers)):
        incomplete.update(result.incomplete)
        for (k, length), (rank, factors) in sorted(result.ranks.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            add(x, k, length, rank, factors)

    entries = [
        HomologyEntry(
            k=k,
            length=length,
            rank=totals.get((k, length), [0])[0],
            torsion=sorted(torsion_factors.get((k, length), [])),
        )
        for length in range(lmax + 1)
        if length not in incomplete
        for k in range(length + 1)
    ]
    per_vertex_entries = None
    if per_vertex:
        per_vertex_entries = sorted(
            (e for e in vertex_rows if e.length not in incomplete),
            key=lambda e: (e.vertex, e.length, e.k),
        )
    return HomologyTable(
        lmax=lmax,
        entries=entries,
        per_vertex=per_vertex_entries,
        torsion_computed=torsion,
        incomplete_lengths=sorted(incomplete),
    )


def compute_homology_at(g: Graph, x: int, k: int, length: int,
                        torsion: bool = True) -> Tuple[int, List[int]]:
    """Rank and torsion of MH^x_{k,l} from the three restricted bases around degree k."""
    if not 0 <= x < g.n:
        raise ArgumentError(f"vertex {x} out of range")
    if k < 0 or length < 0:
        raise ArgumentError(f"bidegree ({k}, {length}) must be non-negative")
    if k > length:
        return 0, []
    d = BallMetric(g, length)
    middle = enumerate_basis(g, k, length, d, start=x)
    upper = enumerate_basis(g, k + 1, length, d, start=x)
    if k == 0:
        d_k = SparseIntMatrix(0, len(middle))
    else:
        d_k = boundary(g, middle, enumerate_basis(g, k - 1, length, d, start=x), d).matrix
    d_k1 = boundary(g, upper, middle, d).matrix
    rank, factors = homology_of_pair(d_k, d_k1, torsion=torsion)
    _check_bound(rank, x, k, length, g.max_degree)
    return rank, factors


def _component_verdict(g: Graph, decomposition: ComponentDecomposition, cid: int, lmax: int,
                       use_morse: MorseMode, workers: Optional[int]) -> ComponentVerdict:
    if decomposition.is_tree(cid):
        return ComponentVerdict(
            component=cid, verdict="Diagonal", certificate=Certificate(kind="Tree", component=cid)
        )
    sub, original = induced_subgraph(g, decomposition.members[cid])

    if decomposition.circuit_rank(cid) == 1:
        cycle = unique_cycle_length(sub, range(sub.n))
        if cycle in (3, 4):
            return ComponentVerdict(
                component=cid,
                verdict="Diagonal",
                certificate=Certificate(kind="UnicyclicShortCycles", component=cid, cycle_length=cycle),
            )

    if is_complete(sub):
        return ComponentVerdict(
            component=cid, verdict="Diagonal", certificate=Certificate(kind="CompleteGraph", component=cid)
        )
    if is_pawful(sub).pawful:
        return ComponentVerdict(
            component=cid, verdict="Diagonal", certificate=Certificate(kind="Pawful", component=cid)
        )

    witnesses = sorted(
        (e.girth, e.u, e.v)
        for e in girth_report(sub).edge_girth
        if is_finite(e.girth) and e.girth >= 5
    )
    if witnesses:
        value, u, v = witnesses[0]
        return ComponentVerdict(
            component=cid,
            verdict="NonDiagonal",
            certificate=Certificate(
                kind="GirthWitness",
                component=cid,
                edge=(original[u], original[v]),
                edge_girth=value,
                bidegree=(2, (value + 1) // 2),
            ),
        )

    table = compute_homology(sub, lmax, torsion=True, use_morse=use_morse, workers=workers)
    found = table.off_diagonal()
    if found is not None:
        return ComponentVerdict(
            component=cid,
            verdict="NonDiagonal",
            certificate=Certificate(
                kind="OffDiagonalRank",
                component=cid,
                bidegree=(found.k, found.length),
                rank=found.rank,
                torsion=found.torsion or None,
            ),
        )
    upto = table.diagonal_up_to
    logger.warning(f"Component {cid} unresolved: diagonal up to l={upto}")
    return ComponentVerdict(
        component=cid,
        verdict="DiagonalUpTo",
        upto=upto,
        certificate=Certificate(kind="ExhaustedToLmax", component=cid),
    )


def decide_diagonality(g: Graph, lmax: Optional[int] = None, use_morse: MorseMode = "auto",
                       workers: Optional[int] = 1) -> DiagonalityVerdict:
    """
    Three-valued diagonality verdict with a certificate.

    Components run through the cascade tree, unicyclic with a 3- or 4-cycle,
    complete, pawful, girth witness and finally direct computation.
    """
    lmax = settings.DEFAULT_LMAX if lmax is None else lmax
    if lmax < 2:
        raise ArgumentError(f"diagonality needs lmax >= 2, got {lmax}")
    decomposition = components(g)
    verdicts = [
        _component_verdict(g, decomposition, cid, lmax, use_morse, workers)
        for cid in decomposition.ids
    ]

    failing = [v for v in verdicts if v.verdict == "NonDiagonal"]
    if failing:
        return DiagonalityVerdict(
            verdict="NonDiagonal", certificate=failing[0].certificate, components=verdicts
        )
    unresolved = [v for v in verdicts if v.verdict == "DiagonalUpTo"]
    if unresolved:
        return DiagonalityVerdict(
            verdict="DiagonalUpTo",
            upto=min(v.upto for v in unresolved),
            certificate=unresolved[0].certificate,
            components=verdicts,
        )
    cyclic = [v for v in verdicts if v.certificate.kind != "Tree"]
    certificate = cyclic[0].certificate if cyclic else Certificate(kind="AllComponentsForest")
    return DiagonalityVerdict(verdict="Diagonal", certificate=certificate, components=verdicts)


def magnitude_from_homology(table: HomologyTable) -> MagnitudeSeries:
    """chi_l = sum_k (-1)^k rank MH_{k,l} over the completely computed lengths."""
    return MagnitudeSeries(
        coefficients=[
            sum((-1) ** k * table.rank(k, length) for k in range(length + 1))
            for length in range(table.diagonal_up_to + 1)
        ]
    )


def magnitude_from_metric(g: Graph, lmax: int) -> MagnitudeSeries:
    """
    Sum of the entries of Z^{-1}, Z[x][y] = q^{d(x,y)}, over series truncated
    at lmax, one component at a time.
    """
    if lmax < 0:
        raise ArgumentError(f"lmax must be non-negative, got {lmax}")
    decomposition = components(g)
    total = TruncatedSeries.zero(lmax)
    for cid in decomposition.ids:
        sub, _ = induced_subgraph(g, decomposition.members[cid])
        dist = all_pairs_distances(sub)
        z = [
            [TruncatedSeries.monomial(dist(x, y), lmax) for y in range(sub.n)]
            for x in range(sub.n)
        ]
        ones = [TruncatedSeries.constant(1, lmax)] * sub.n
        for w in solve_series_system(z, ones):
            total = total + w
    return MagnitudeSeries(coefficients=list(total.coefficients))


def euler_characteristic_from_chains(g: Graph, lmax: int) -> List[int]:
    """sum_k (-1)^k rank MC_{k,l} for each l <= lmax, straight from the generators."""
    d = BallMetric(g, lmax)
    out: List[int] = []
    for length in range(lmax + 1):
        found = enumerate_generators(d, length, range(g.n))
        out.append(sum((-1) ** k * len(ts) for k, ts in found.items()))
    return out


def assert_magnitude_agreement(g: Graph, table: HomologyTable) -> MagnitudeSeries:
    from_homology = magnitude_from_homology(table)
    from_metric = magnitude_from_metric(g, from_homology.lmax)
    if from_homology.coefficients != from_metric.coefficients:
        raise OracleMismatch(
            f"magnitude from homology {from_homology.coefficients} != "
            f"magnitude from metric {from_metric.coefficients}"
        )
    return from_homology
