"""
Magnitude chain groups MC_{k,l}: generator enumeration, smooth points and
gaps, boundary matrices and per-start-vertex chain complexes.
"""

from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Mapping, Optional, Tuple

from src.application.linalg import SparseIntMatrix, homology_of_pair
from src.domain.exceptions import ArgumentError, BudgetExceeded, ContractViolation
from src.domain.models import ChainBasis, ChainTuple, Graph, Metric, is_finite
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def is_smooth(t: ChainTuple, i: int, d: Metric) -> bool:
    vs = t.vertices
    if not 1 <= i <= len(vs) - 2:
        raise ArgumentError(f"{i} is not an interior index of {t}")
    return d(vs[i - 1], vs[i + 1]) == d(vs[i - 1], vs[i]) + d(vs[i], vs[i + 1])


def smooth_points(t: ChainTuple, d: Metric) -> List[int]:
    return [i for i in range(1, len(t.vertices) - 1) if is_smooth(t, i, d)]


def first_gap(t: ChainTuple, d: Metric) -> Optional[Tuple[int, int]]:
    vs = t.vertices
    for g in range(len(vs) - 1):
        step = d(vs[g], vs[g + 1])
        if step >= 2:
            return g, step
    return None


def first_smooth_before_gap(t: ChainTuple, d: Metric) -> Optional[int]:
    """
    Smallest smooth j with 1 <= j <= g - 1, (x_g, x_{g+1}) the first gap.

    Without a gap this is the first smooth point anywhere.
    """
    gap = first_gap(t, d)
    stop = gap[0] if gap is not None else len(t.vertices) - 1
    for j in range(1, stop):
        if is_smooth(t, j, d):
            return j
    return None


def _extend(d: Metric, prefix: List[int], used: int, length: int, k: Optional[int],
            end: Optional[int], out: Dict[int, List[ChainTuple]], budget: Optional[int],
            counter: List[int]):
    budget_left = length - used
    degree = len(prefix) - 1
    if budget_left == 0:
        if (k is None or degree == k) and (end is None or prefix[-1] == end):
            out.setdefault(degree, []).append(ChainTuple(tuple(prefix), length))
            counter[0] += 1
            if budget is not None and counter[0] > budget:
                raise BudgetExceeded(counter[0], budget)
        return
    steps_left = None if k is None else k - degree
    if steps_left is not None and (steps_left < 1 or steps_left > budget_left):
        return
    max_step = budget_left if steps_left is None else budget_left - (steps_left - 1)
    last = prefix[-1]
    for r, layer in sorted(d.spheres(last).items()):
        if r > max_step:
            break
        rest = budget_left - r
        for v in layer:
            if end is not None:
                if rest == 0 and v != end:
                    continue
                reach = d(v, end)
                if not is_finite(reach) or reach > rest:
                    continue
            if steps_left == 1 and rest != 0:
                continue
            prefix.append(v)
            _extend(d, prefix, used + r, length, k, end, out, budget, counter)
            prefix.pop()


def enumerate_generators(d: Metric, length: int, starts, k: Optional[int] = None,
                         end: Optional[int] = None, budget: Optional[int] = None
                         ) -> Dict[int, List[ChainTuple]]:
    """Generators of length `length` starting in `starts`, grouped by degree."""
    out: Dict[int, List[ChainTuple]] = {}
    counter = [0]
    for x in starts:
        _extend(d, [x], 0, length, k, end, out, budget, counter)
    return out


def enumerate_basis(g: Graph, k: int, length: int, d: Metric, start: Optional[int] = None,
                    end: Optional[int] = None, budget: Optional[int] = None) -> ChainBasis:
    if k < 0 or length < 0:
        raise ArgumentError(f"bidegree ({k}, {length}) must be non-negative")
    if k > length:
        return ChainBasis.build(k, length, [], start, end)
    starts = range(g.n) if start is None else (start,)
    found = enumerate_generators(d, length, starts, k=k, end=end, budget=budget)
    return ChainBasis.build(k, length, found.get(k, []), start, end)


@dataclass(frozen=True)
class BoundarySpec:
    source: ChainBasis
    target: ChainBasis
    matrix: SparseIntMatrix


def boundary_column(t: ChainTuple, d: Metric) -> Dict[ChainTuple, int]:
    column: Dict[ChainTuple, int] = {}
    for i in range(1, len(t.vertices) - 1):
        if is_smooth(t, i, d):
            face = t.delete(i, d)
            column[face] = column.get(face, 0) + (-1 if i % 2 else 1)
    return {face: v for face, v in column.items() if v}


def boundary(g: Graph, source: ChainBasis, target: ChainBasis, d: Metric) -> BoundarySpec:
    if source.k != target.k + 1 or source.length != target.length:
        raise ArgumentError(
            f"cannot map ({source.k},{source.length}) to ({target.k},{target.length})"
        )
    if not source.same_restriction(target):
        raise ArgumentError("source and target bases carry different restrictions")
    matrix = SparseIntMatrix(len(target), len(source))
    for col, t in enumerate(source):
        for face, v in boundary_column(t, d).items():
            row = target.index.get(face)
            if row is None:
                raise ContractViolation(f"face {face} of {t} is missing from the target basis")
            matrix[row, col] = v
    return BoundarySpec(source=source, target=target, matrix=matrix)


@dataclass(frozen=True)
class ChainComplex:
    """
    A finite chain complex of free abelian groups with ordered bases.

    `cells[k]` lists the basis of degree k; `differentials[k]` is the matrix
    of C_k -> C_{k-1} with rows indexed by `cells[k-1]`.
    """

    cells: Mapping[int, Tuple[ChainTuple, ...]]
    differentials: Mapping[int, SparseIntMatrix]
    truncation: Optional[Tuple[int, int]] = None
    _index: Dict[int, Dict[ChainTuple, int]] = field(default_factory=dict, compare=False, repr=False)

    @property
    def degrees(self) -> List[int]:
        return sorted(self.cells)

    def size(self, k: int) -> int:
        return len(self.cells.get(k, ()))

    @property
    def total_size(self) -> int:
        return sum(len(c) for c in self.cells.values())

    def index(self, k: int) -> Dict[ChainTuple, int]:
        found = self._index.get(k)
        if found is None:
            found = {t: i for i, t in enumerate(self.cells.get(k, ()))}
            self._index[k] = found
        return found

    def differential(self, k: int) -> SparseIntMatrix:
        m = self.differentials.get(k)
        if m is None:
            return SparseIntMatrix(self.size(k - 1), self.size(k))
        return m

    def boundary_of(self, k: int, t: ChainTuple) -> Dict[ChainTuple, int]:
        """The column of the differential at cell t as {face: coefficient}."""
        col = self.index(k)[t]
        faces = self.cells.get(k - 1, ())
        return {faces[r]: v for r, v in self.differential(k).column(col).items()}


def build_complex(g: Graph, d: Metric, length: int, start: int, end: Optional[int] = None,
                  budget: Optional[int] = None) -> ChainComplex:
    """The complex MC^{x}_{*,l}, or MC^{x,y}_{*,l} when `end` is given."""
    found = enumerate_generators(d, length, (start,), end=end, budget=budget)
    cells = {k: tuple(sorted(found.get(k, []))) for k in range(0, length + 1)}
    differentials: Dict[int, SparseIntMatrix] = {}
    for k in range(1, length + 1):
        rows = {t: i for i, t in enumerate(cells[k - 1])}
        m = SparseIntMatrix(len(cells[k - 1]), len(cells[k]))
        for col, t in enumerate(cells[k]):
            for face, v in boundary_column(t, d).items():
                m[rows[face], col] = v
        differentials[k] = m
    logger.debug(
        f"Complex at x={start}, l={length}: sizes {[len(cells[k]) for k in range(length + 1)]}"
    )
    return ChainComplex(cells=cells, differentials=differentials)


def chain_rank(g: Graph, d: Metric, k: int, length: int) -> int:
    """rank MC_{k,l}(G), the number of generators."""
    return len(enumerate_basis(g, k, length, d))


def basis_size_bound(k: int, length: int, max_degree: int, starts: int) -> int:
    if k < 1 or k > length:
        return starts if k == length == 0 else 0
    return comb(length - 1, k - 1) * max_degree ** length * starts


def dump_basis(basis: ChainBasis) -> List[str]:
    return basis.dump()


def complex_homology(cx: ChainComplex, k: int, torsion: bool = True) -> Tuple[int, List[int]]:
    """Rank and torsion of H_k of a chain complex."""
    return homology_of_pair(cx.differential(k), cx.differential(k + 1), torsion=torsion)
