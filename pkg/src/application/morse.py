"""
Algebraic Morse reduction of chain complexes, and the girth matchings that
delete the first smooth point before the first gap (f) and the smooth
first-gap vertex (h).
"""

from dataclasses import dataclass, field
from typing import Dict, List, Literal, Mapping, Optional, Set, Tuple

from src.application.chain_service import (ChainComplex, build_complex,
                                           first_gap, first_smooth_before_gap,
                                           is_smooth)
from src.application.graph_service import girth_vertex
from src.application.linalg import SparseIntMatrix
from src.domain.exceptions import (ArgumentError, ContractViolation,
                                   PreconditionError)
from src.domain.models import ChainTuple, Extended, Graph, Metric, is_finite
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

UnmatchedTag = Literal["i", "ii", "iii", "iv", "matched"]


@dataclass(frozen=True)
class MatchedPair:
    upper: ChainTuple
    lower: ChainTuple
    coefficient: int

    @property
    def degree(self) -> int:
        return self.upper.degree


@dataclass(frozen=True)
class MorseMatching:
    pairs: Tuple[MatchedPair, ...] = ()
    kind: str = "custom"
    _by_lower: Dict[ChainTuple, MatchedPair] = field(default_factory=dict, compare=False, repr=False)
    _by_upper: Dict[ChainTuple, MatchedPair] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        for pair in self.pairs:
            self._by_lower.setdefault(pair.lower, pair)
            self._by_upper.setdefault(pair.upper, pair)

    def __len__(self) -> int:
        return len(self.pairs)

    def pair_of_lower(self, t: ChainTuple) -> Optional[MatchedPair]:
        return self._by_lower.get(t)

    def pair_of_upper(self, t: ChainTuple) -> Optional[MatchedPair]:
        return self._by_upper.get(t)

    def is_matched(self, t: ChainTuple) -> bool:
        return t in self._by_lower or t in self._by_upper

    def dump(self) -> List[str]:
        return [f"{p.upper} -> {p.lower} ({p.coefficient:+d})" for p in self.pairs]


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    violation: Optional[Literal["disjointness", "coefficient", "cycle"]] = None
    detail: Optional[str] = None


@dataclass(frozen=True)
class ReducedComplex(ChainComplex):
    """Critical cells of a Morse matching and the induced differentials."""

    original_sizes: Mapping[int, int] = field(default_factory=dict)
    matched_pairs: int = 0


def _local_girth(g: Graph, x: int, girth_x: Optional[Extended]) -> Extended:
    return girth_vertex(g, x) if girth_x is None else girth_x


def build_f_matching(g: Graph, x: int, length: int, d: Metric, i_max: Optional[int] = None,
                     cx: Optional[ChainComplex] = None,
                     girth_x: Optional[Extended] = None) -> MorseMatching:
    """
    Pair every tuple of T_{l-i}, 0 <= i <= i_max, with the deletion of its
    first smooth point before the first gap.
    """
    gx = _local_girth(g, x, girth_x)
    if gx < 5:
        raise PreconditionError(f"gir_{x} = {gx} < 5; the f-matching needs girth at least 5")
    if length == 0:
        return MorseMatching(kind="f")
    if i_max is None:
        i_max = length - 1
    if not 0 <= i_max <= length - 1:
        raise ArgumentError(f"depth {i_max} outside [0, {length - 1}]")
    cx = cx or build_complex(g, d, length, x)
    pairs: List[MatchedPair] = []
    for i in range(i_max + 1):
        k = length - i
        for t in cx.cells.get(k, ()):
            j = first_smooth_before_gap(t, d)
            if j is None:
                continue
            lower = t.delete(j, d)
            coefficient = cx.boundary_of(k, t).get(lower, 0)
            pairs.append(MatchedPair(upper=t, lower=lower, coefficient=coefficient))
    logger.debug(f"f-matching at x={x}, l={length}: {len(pairs)} pairs")
    return MorseMatching(pairs=tuple(pairs), kind="f")


def build_h_matching(g: Graph, x: int, length: int, i: int, d: Metric, reduced: ReducedComplex,
                     girth_x: Optional[Extended] = None) -> MorseMatching:
    """
    On the f-reduced complex, pair each critical tuple of degree l-j,
    1 <= j <= i, whose first gap sits at g >= 1 with x_g smooth, with the
    deletion of x_g.
    """
    gx = _local_girth(g, x, girth_x)
    if gx < 2 * i + 5:
        raise PreconditionError(f"gir_{x} = {gx} < {2 * i + 5}; the h-matching needs 2i + 5")
    if i == 0:
        return MorseMatching(kind="h")
    if not 1 <= i <= length - 1:
        raise ArgumentError(f"depth {i} outside [1, {length - 1}]")
    pairs: List[MatchedPair] = []
    for j in range(1, i + 1):
        k = length - j
        for t in reduced.cells.get(k, ()):
            gap = first_gap(t, d)
            if gap is None or gap[0] < 1 or not is_smooth(t, gap[0], d):
                continue
            lower = t.delete(gap[0], d)
            coefficient = reduced.boundary_of(k, t).get(lower)
            if coefficient is None:
                raise PreconditionError(f"h-image {lower} of {t} is not a critical face")
            pairs.append(MatchedPair(upper=t, lower=lower, coefficient=coefficient))
    logger.debug(f"h-matching at x={x}, l={length}, i={i}: {len(pairs)} pairs")
    return MorseMatching(pairs=tuple(pairs), kind="h")


def validate_matching(cx: ChainComplex, m: MorseMatching) -> ValidityReport:
    seen: Set[ChainTuple] = set()
    for pair in m.pairs:
        for cell in (pair.upper, pair.lower):
            if cell in seen:
                return ValidityReport(False, "disjointness", f"{cell} appears in two pairs")
            seen.add(cell)

    for pair in m.pairs:
        k = pair.degree
        if pair.upper not in cx.index(k) or pair.lower not in cx.index(k - 1):
            return ValidityReport(False, "coefficient", f"{pair.upper} -> {pair.lower} is not a cell pair")
        actual = cx.boundary_of(k, pair.upper).get(pair.lower, 0)
        if actual != pair.coefficient or abs(actual) != 1:
            return ValidityReport(
                False, "coefficient",
                f"[{pair.upper} : {pair.lower}] = {actual}, expected a unit",
            )

    # Within one degree layer a cycle of the inverted digraph alternates
    # matched up-edges with ordinary down-edges; walk it on matched uppers.
    by_degree: Dict[int, List[MatchedPair]] = {}
    for pair in m.pairs:
        by_degree.setdefault(pair.degree, []).append(pair)
    for k, layer in sorted(by_degree.items()):
        successors: Dict[ChainTuple, List[ChainTuple]] = {}
        for pair in layer:
            nxt = []
            for face in cx.boundary_of(k, pair.upper):
                if face == pair.lower:
                    continue
                other = m.pair_of_lower(face)
                if other is not None and other.degree == k:
                    nxt.append(other.upper)
            successors[pair.upper] = nxt
        cycle_at = _find_cycle(successors)
        if cycle_at is not None:
            return ValidityReport(False, "cycle", f"closed path through {cycle_at} in degree {k}")
    return ValidityReport(True)


def _find_cycle(successors: Mapping[ChainTuple, List[ChainTuple]]) -> Optional[ChainTuple]:
    WHITE, GREY, BLACK = 0, 1, 2
    colour: Dict[ChainTuple, int] = {}
    for root in successors:
        if colour.get(root, WHITE) != WHITE:
            continue
        stack = [(root, iter(successors[root]))]
        colour[root] = GREY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                state = colour.get(nxt, WHITE)
                if state == GREY:
                    return nxt
                if state == WHITE:
                    colour[nxt] = GREY
                    stack.append((nxt, iter(successors.get(nxt, ()))))
                    advanced = True
                    break
            if not advanced:
                colour[node] = BLACK
                stack.pop()
    return None


def reduce(cx: ChainComplex, m: MorseMatching, validate: bool = True,
           truncation: Optional[Tuple[int, int]] = None) -> ReducedComplex:
    """
    The Morse complex of `cx`: critical cells with differentials summed over
    zig-zag paths, flows memoised per matched face.
    """
    if validate:
        report = validate_matching(cx, m)
        if not report.valid:
            raise PreconditionError(f"not a Morse matching ({report.violation}): {report.detail}")
    for pair in m.pairs:
        if abs(pair.coefficient) != 1:
            raise ContractViolation(
                f"{pair.upper} -> {pair.lower} has coefficient {pair.coefficient}, not a unit"
            )

    critical = {
        k: tuple(t for t in cells if not m.is_matched(t)) for k, cells in cx.cells.items()
    }
    flows: Dict[ChainTuple, Dict[ChainTuple, int]] = {}

    def value(b: ChainTuple) -> Dict[ChainTuple, int]:
        if m.pair_of_upper(b) is not None:
            return {}
        if m.pair_of_lower(b) is None:
            return {b: 1}
        return _flow(b)

    def _flow(b0: ChainTuple) -> Dict[ChainTuple, int]:
        stack = [b0]
        visiting: Set[ChainTuple] = set()
        while stack:
            b = stack[-1]
            if b in flows:
                stack.pop()
                continue
            pair = m.pair_of_lower(b)
            faces = cx.boundary_of(pair.degree, pair.upper)
            pending = [
                f for f in faces
                if f != b and f not in flows and m.pair_of_lower(f) is not None
            ]
            if pending:
                if b in visiting:
                    raise PreconditionError(f"gradient path through {b} closes a cycle")
                visiting.add(b)
                stack.extend(pending)
                continue
            inverse = pair.coefficient
            total: Dict[ChainTuple, int] = {}
            for f, coefficient in faces.items():
                if f == b:
                    continue
                for c, w in value(f).items():
                    total[c] = total.get(c, 0) - inverse * coefficient * w
            flows[b] = {c: w for c, w in total.items() if w}
            visiting.discard(b)
            stack.pop()
        return flows[b0]

    differentials: Dict[int, SparseIntMatrix] = {}
    for k in sorted(critical):
        if k == 0:
            continue
        rows = {t: i for i, t in enumerate(critical.get(k - 1, ()))}
        matrix = SparseIntMatrix(len(rows), len(critical[k]))
        for col, alpha in enumerate(critical[k]):
            acc: Dict[ChainTuple, int] = {}
            for face, coefficient in cx.boundary_of(k, alpha).items():
                for c, w in value(face).items():
                    acc[c] = acc.get(c, 0) + coefficient * w
            for c, w in acc.items():
                if w:
                    matrix[rows[c], col] = w
        differentials[k] = matrix

    logger.debug(
        f"Morse reduction ({m.kind}): {cx.total_size} cells -> "
        f"{sum(len(c) for c in critical.values())} critical"
    )
    return ReducedComplex(
        cells=critical,
        differentials=differentials,
        truncation=truncation if truncation is not None else cx.truncation,
        original_sizes={k: len(cells) for k, cells in cx.cells.items()},
        matched_pairs=len(m),
    )


def classify_unmatched(t: ChainTuple, g: Graph, x: int, d: Metric,
                       girth_x: Optional[Extended] = None) -> UnmatchedTag:
    """Which unmatched condition the tuple meets under the full f-matching, or "matched"."""
    gx = _local_girth(g, x, girth_x)
    if gx < 5:
        raise PreconditionError(f"gir_{x} = {gx} < 5")
    if t.start != x:
        raise ArgumentError(f"{t} does not start at {x}")
    if first_smooth_before_gap(t, d) is not None:
        return "matched"
    gap = first_gap(t, d)
    if gap is None:
        return "i"
    pos, dist = gap
    vs = t.vertices
    if dist == 2:
        for z in g.neighbor_sets[vs[pos]] & g.neighbor_sets[vs[pos + 1]]:
            lifted = ChainTuple(vs[:pos + 1] + (z,) + vs[pos + 1:], t.length)
            if first_smooth_before_gap(lifted, d) == pos + 1:
                return "matched"
    if pos == 0:
        return "iv"
    return "ii" if dist >= 3 else "iii"


def h_depth(length: int, girth_x: Extended) -> int:
    """Largest i <= l - 1 with gir_x >= 2i + 5."""
    if length < 1:
        return 0
    if not is_finite(girth_x):
        return length - 1
    return max(0, min(length - 1, (girth_x - 5) // 2))


def morse_reduce_vertex(g: Graph, x: int, length: int, d: Metric, girth_x: Optional[Extended] = None,
                        cx: Optional[ChainComplex] = None, use_h: bool = True,
                        validate: bool = False) -> ReducedComplex:
    """Apply the f-matching and then the deepest admissible h-matching at x."""
    gx = _local_girth(g, x, girth_x)
    cx = cx or build_complex(g, d, length, x)
    f_matching = build_f_matching(g, x, length, d, cx=cx, girth_x=gx)
    reduced = reduce(cx, f_matching, validate=validate)
    i = h_depth(length, gx) if use_h else 0
    if i == 0:
        return reduced
    h_matching = build_h_matching(g, x, length, i, d, reduced, girth_x=gx)
    twice = reduce(reduced, h_matching, validate=validate, truncation=(length - i - 1, length))
    return ReducedComplex(
        cells=twice.cells,
        differentials=twice.differentials,
        truncation=twice.truncation,
        original_sizes=dict(reduced.original_sizes),
        matched_pairs=reduced.matched_pairs + twice.matched_pairs,
    )


def restriction_mismatches(original: ChainComplex, reduced: ChainComplex) -> List[Tuple[int, ChainTuple]]:
    """
    Critical cells whose reduced boundary differs from the original boundary
    restricted to critical faces.
    """
    out: List[Tuple[int, ChainTuple]] = []
    for k in reduced.degrees:
        if k == 0:
            continue
        critical_faces = set(reduced.cells.get(k - 1, ()))
        for alpha in reduced.cells[k]:
            restricted = {
                f: v for f, v in original.boundary_of(k, alpha).items() if f in critical_faces
            }
            if restricted != reduced.boundary_of(k, alpha):
                out.append((k, alpha))
    return out


def dump_matching(m: MorseMatching) -> List[str]:
    return m.dump()


def dump_critical_cells(rc: ChainComplex) -> List[str]:
    return [f"{k}\t{t}" for k in rc.degrees for t in rc.cells[k]]
