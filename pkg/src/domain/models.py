"""
Core entities shared by every layer.

These are plain immutable Python objects rather than pydantic models: they sit
on the hot paths of enumeration and elimination.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import (Dict, FrozenSet, Iterable, Iterator, List, Mapping,
                    NamedTuple, Optional, Protocol, Sequence, Tuple,
                    Union)

from src.domain.exceptions import ArgumentError, GraphValidationError


class Infinity:
    """The distinguished value of the extended non-negative integers."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (Infinity, ())

    def __hash__(self) -> int:
        return hash("maghom.Infinity")

    def __eq__(self, other) -> bool:
        return isinstance(other, Infinity)

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return isinstance(other, Infinity)

    def __gt__(self, other) -> bool:
        return not isinstance(other, Infinity)

    def __ge__(self, other) -> bool:
        return True

    def __add__(self, other) -> "Infinity":
        if isinstance(other, (int, Infinity)):
            return self
        return NotImplemented

    __radd__ = __add__


INF = Infinity()

Extended = Union[int, Infinity]


def is_finite(value: Extended) -> bool:
    return not isinstance(value, Infinity)


Edge = Tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """
    Immutable simple undirected graph on vertex ids 0..n-1.

    `adjacency[x]` is the sorted tuple of neighbours of x. `labels`, when
    present, maps ids back to the names found in the input document.
    """

    n: int
    adjacency: Tuple[Tuple[int, ...], ...]
    labels: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphValidationError("a graph needs a nonempty vertex set")
        if len(self.adjacency) != self.n:
            raise GraphValidationError(
                f"adjacency has {len(self.adjacency)} rows for {self.n} vertices"
            )
        if self.labels is not None and len(self.labels) != self.n:
            raise GraphValidationError("label table does not cover every vertex")
        for x, nbrs in enumerate(self.adjacency):
            previous = -1
            for y in nbrs:
                if y == x:
                    raise GraphValidationError(f"self-loop at vertex {x}")
                if not 0 <= y < self.n:
                    raise GraphValidationError(f"neighbour {y} of {x} out of range")
                if y <= previous:
                    raise GraphValidationError(
                        f"neighbours of {x} are not strictly increasing"
                    )
                previous = y
        for x, y in self.edge_list:
            if x not in self.neighbor_sets[y]:
                raise GraphValidationError(f"edge {{{x},{y}}} is not symmetric")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Tuple[int, int]],
        labels: Optional[Sequence[str]] = None,
    ) -> "Graph":
        """Build a graph, collapsing duplicate edges and rejecting self-loops."""
        buckets: List[set] = [set() for _ in range(max(n, 0))]
        for u, v in edges:
            if u == v:
                raise GraphValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphValidationError(f"edge ({u}, {v}) out of range for n={n}")
            buckets[u].add(v)
            buckets[v].add(u)
        return cls(
            n=n,
            adjacency=tuple(tuple(sorted(b)) for b in buckets),
            labels=tuple(labels) if labels is not None else None,
        )

    @cached_property
    def neighbor_sets(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(frozenset(nbrs) for nbrs in self.adjacency)

    @cached_property
    def edge_list(self) -> Tuple[Edge, ...]:
        """Edges as (u, v) with u < v, sorted lexicographically."""
        return tuple(
            (x, y) for x, nbrs in enumerate(self.adjacency) for y in nbrs if x < y
        )

    @property
    def edges(self) -> FrozenSet[Edge]:
        return frozenset(self.edge_list)

    @property
    def edge_count(self) -> int:
        return len(self.edge_list)

    def degree(self, x: int) -> int:
        return len(self.adjacency[x])

    @property
    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self.adjacency), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)


class Metric(Protocol):
    """Anything that answers d(x, y) and the spheres around x."""

    n: int

    def __call__(self, x: int, y: int) -> Extended: ...

    def spheres(self, x: int) -> Dict[int, Tuple[int, ...]]: ...


class DistanceMatrix:
    """All-pairs extended shortest-path distances of a graph."""

    def __init__(self, rows: Sequence[Sequence[Extended]]):
        self.n = len(rows)
        self._rows: Tuple[Tuple[Extended, ...], ...] = tuple(tuple(r) for r in rows)
        self._spheres: Optional[Tuple[Dict[int, Tuple[int, ...]], ...]] = None

    def __call__(self, x: int, y: int) -> Extended:
        return self._rows[x][y]

    def __getitem__(self, x: int) -> Tuple[Extended, ...]:
        return self._rows[x]

    def __eq__(self, other) -> bool:
        return isinstance(other, DistanceMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    @property
    def rows(self) -> Tuple[Tuple[Extended, ...], ...]:
        return self._rows

    def spheres(self, x: int) -> Dict[int, Tuple[int, ...]]:
        """Map r -> vertices at finite distance r >= 1 from x."""
        if self._spheres is None:
            table = []
            for row in self._rows:
                layers: Dict[int, List[int]] = {}
                for y, dist in enumerate(row):
                    if is_finite(dist) and dist > 0:
                        layers.setdefault(dist, []).append(y)
                table.append({r: tuple(vs) for r, vs in layers.items()})
            self._spheres = tuple(table)
        return self._spheres[x]

    @property
    def diameter(self) -> Extended:
        return max((max(row) for row in self._rows), default=0)


@dataclass(frozen=True)
class ComponentDecomposition:
    """
    Connected components labelled by their minimum vertex id.

    `assignment[v]` is the id of the component containing v; `ids` lists the
    component ids in increasing order.
    """

    assignment: Tuple[int, ...]
    ids: Tuple[int, ...]
    members: Mapping[int, Tuple[int, ...]]
    edge_counts: Mapping[int, int]

    @property
    def count(self) -> int:
        return len(self.ids)

    def vertex_count(self, cid: int) -> int:
        return len(self.members[cid])

    def circuit_rank(self, cid: int) -> int:
        return self.edge_counts[cid] - len(self.members[cid]) + 1

    def is_tree(self, cid: int) -> bool:
        return self.circuit_rank(cid) == 0


class ChainTuple(NamedTuple):
    """
    A generator (x_0, ..., x_k) of a magnitude chain group with its cached
    total length L.
    """

    vertices: Tuple[int, ...]
    length: int

    @classmethod
    def of(cls, vertices: Sequence[int], d: "Metric") -> "ChainTuple":
        vs = tuple(vertices)
        if not vs:
            raise ArgumentError("a chain tuple needs at least one vertex")
        total = 0
        for a, b in zip(vs, vs[1:]):
            if a == b:
                raise ArgumentError(f"consecutive entries coincide in {vs}")
            step = d(a, b)
            if not is_finite(step):
                raise ArgumentError(f"infinite step {a}->{b} in {vs}")
            total += step
        return cls(vs, total)

    @property
    def degree(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def delete(self, i: int, d: "Metric") -> "ChainTuple":
        vs = self.vertices
        length = self.length
        if 0 < i < len(vs) - 1:
            length += d(vs[i - 1], vs[i + 1]) - d(vs[i - 1], vs[i]) - d(vs[i], vs[i + 1])
        elif i == 0 and len(vs) > 1:
            length -= d(vs[0], vs[1])
        elif i == len(vs) - 1 and len(vs) > 1:
            length -= d(vs[-2], vs[-1])
        return ChainTuple(vs[:i] + vs[i + 1:], length)

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.vertices) + ")"


@dataclass(frozen=True)
class ChainBasis:
    """Ordered generators of MC_{k,l}, optionally restricted by endpoints."""

    k: int
    length: int
    start: Optional[int]
    end: Optional[int]
    generators: Tuple[ChainTuple, ...]
    index: Mapping[ChainTuple, int] = field(compare=False, repr=False)

    @classmethod
    def build(
        cls,
        k: int,
        length: int,
        generators: Iterable[ChainTuple],
        start: Optional[int] = None,
        end: Optional[int] = None,
    ) -> "ChainBasis":
        ordered = tuple(sorted(generators))
        return cls(
            k=k,
            length=length,
            start=start,
            end=end,
            generators=ordered,
            index={t: i for i, t in enumerate(ordered)},
        )

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[ChainTuple]:
        return iter(self.generators)

    def __contains__(self, t) -> bool:
        return t in self.index

    def same_restriction(self, other: "ChainBasis") -> bool:
        return self.start == other.start and self.end == other.end

    def dump(self) -> List[str]:
        return [str(t) for t in self.generators]
