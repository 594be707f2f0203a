"""
Metric and cycle structure of graphs: BFS distances, connected components,
local girths, cycle counts, circuit rank and the pawful certificate.
"""

from collections import deque
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from src.domain.exceptions import ArgumentError
from src.domain.models import (INF, ComponentDecomposition, DistanceMatrix,
                               Extended, Graph, normalize_edge)
from src.domain.value_objects import EdgeGirth, GirthReport, PawfulCheck
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def bfs_distances(g: Graph, source: int, skip_edge: Optional[Tuple[int, int]] = None,
                  target: Optional[int] = None, limit: Optional[int] = None) -> Dict[int, int]:
    """
    Hop distances from `source` to every reachable vertex.

    `skip_edge` removes a single edge from the search, `target` stops the
    search once that vertex is labelled and `limit` bounds the radius.
    """
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if limit is not None and du >= limit:
            continue
        for v in g.adjacency[u]:
            if v in dist:
                continue
            if skip_edge is not None and normalize_edge(u, v) == skip_edge:
                continue
            dist[v] = du + 1
            if v == target:
                return dist
            queue.append(v)
    return dist


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    rows: List[List[Extended]] = []
    for x in range(g.n):
        reached = bfs_distances(g, x)
        rows.append([reached.get(y, INF) for y in range(g.n)])
    return DistanceMatrix(rows)


class BallMetric:
    """
    Distances truncated at `radius`, computed lazily one BFS per vertex.

    Pairs further apart than `radius` read as INF. Every distance a chain
    tuple of length at most `radius` consults is exact under this metric.
    """

    def __init__(self, g: Graph, radius: int):
        self.n = g.n
        self.radius = radius
        self._graph = g
        self._rows: Dict[int, Dict[int, int]] = {}
        self._spheres: Dict[int, Dict[int, Tuple[int, ...]]] = {}

    def _row(self, x: int) -> Dict[int, int]:
        row = self._rows.get(x)
        if row is None:
            row = bfs_distances(self._graph, x, limit=self.radius)
            self._rows[x] = row
        return row

    def __call__(self, x: int, y: int) -> Extended:
        return self._row(x).get(y, INF)

    def spheres(self, x: int) -> Dict[int, Tuple[int, ...]]:
        layers = self._spheres.get(x)
        if layers is None:
            grouped: Dict[int, List[int]] = {}
            for y, r in self._row(x).items():
                if r > 0:
                    grouped.setdefault(r, []).append(y)
            layers = {r: tuple(sorted(vs)) for r, vs in grouped.items()}
            self._spheres[x] = layers
        return layers


def components(g: Graph) -> ComponentDecomposition:
    assignment = [-1] * g.n
    members: Dict[int, Tuple[int, ...]] = {}
    for root in range(g.n):
        if assignment[root] != -1:
            continue
        reached = sorted(bfs_distances(g, root))
        for v in reached:
            assignment[v] = root
        members[root] = tuple(reached)
    edge_counts = {cid: 0 for cid in members}
    for u, _ in g.edge_list:
        edge_counts[assignment[u]] += 1
    return ComponentDecomposition(
        assignment=tuple(assignment),
        ids=tuple(sorted(members)),
        members=members,
        edge_counts=edge_counts,
    )


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> Tuple[Graph, Tuple[int, ...]]:
    """
    Relabel the subgraph induced on `vertices` to ids 0..len-1.

    Returns the subgraph and the tuple mapping new ids to original ids.
    """
    original = tuple(sorted(vertices))
    local = {v: i for i, v in enumerate(original)}
    edges = [
        (local[u], local[v])
        for u in original
        for v in g.adjacency[u]
        if u < v and v in local
    ]
    labels = tuple(g.label(v) for v in original) if g.labels is not None else None
    return Graph.from_edges(len(original), edges, labels), original


def _check_edge(g: Graph, e: Tuple[int, int]) -> Tuple[int, int]:
    u, v = e
    if not (0 <= u < g.n and 0 <= v < g.n) or not g.has_edge(u, v):
        raise ArgumentError(f"{{{u},{v}}} is not an edge")
    return normalize_edge(u, v)


def girth_edge(g: Graph, e: Tuple[int, int]) -> Extended:
    edge = _check_edge(g, e)
    reached = bfs_distances(g, edge[0], skip_edge=edge, target=edge[1])
    if edge[1] not in reached:
        return INF
    return 1 + reached[edge[1]]


def girth_vertex(g: Graph, x: int) -> Extended:
    if not 0 <= x < g.n:
        raise ArgumentError(f"vertex {x} out of range")
    best: Extended = INF
    for y in g.adjacency[x]:
        value = girth_edge(g, (x, y))
        if value < best:
            best = value
            if best == 3:
                break
    return best


def two_core(g: Graph) -> Set[int]:
    """Vertices that survive repeated removal of vertices of degree <= 1."""
    degree = [g.degree(x) for x in range(g.n)]
    alive = [True] * g.n
    stack = [x for x in range(g.n) if degree[x] <= 1]
    while stack:
        x = stack.pop()
        if not alive[x]:
            continue
        alive[x] = False
        for y in g.adjacency[x]:
            if alive[y]:
                degree[y] -= 1
                if degree[y] == 1:
                    stack.append(y)
    return {x for x in range(g.n) if alive[x]}


def girth(g: Graph) -> Extended:
    core = two_core(g)
    best: Extended = INF
    for u, v in g.edge_list:
        if u in core and v in core:
            value = girth_edge(g, (u, v))
            if value < best:
                best = value
                if best == 3:
                    break
    return best


def girth_report(g: Graph) -> GirthReport:
    core = two_core(g)
    edge_values: Dict[Tuple[int, int], Extended] = {}
    for u, v in g.edge_list:
        edge_values[(u, v)] = girth_edge(g, (u, v)) if u in core and v in core else INF
    vertex_values: List[Extended] = [INF] * g.n
    for (u, v), value in edge_values.items():
        if value < vertex_values[u]:
            vertex_values[u] = value
        if value < vertex_values[v]:
            vertex_values[v] = value
    return GirthReport(
        girth=min(edge_values.values(), default=INF),
        vertex_girth=vertex_values,
        edge_girth=[EdgeGirth(u=u, v=v, girth=val) for (u, v), val in edge_values.items()],
    )


def circuit_rank(g: Graph, decomposition: Optional[ComponentDecomposition] = None) -> int:
    decomposition = decomposition or components(g)
    return g.edge_count - g.n + decomposition.count


def tree_vertex_count(g: Graph, decomposition: Optional[ComponentDecomposition] = None) -> int:
    decomposition = decomposition or components(g)
    return sum(
        decomposition.vertex_count(cid)
        for cid in decomposition.ids
        if decomposition.is_tree(cid)
    )


def count_cycles_up_to(g: Graph, m: int) -> Dict[int, int]:
    """
    Number of cycles of each length 3..m, each cycle counted once.

    A cycle is found from its smallest vertex r along paths through vertices
    larger than r; the orientation with path[1] < path[-1] is kept.
    """
    if m < 3:
        raise ArgumentError(f"maximum cycle length must be at least 3, got {m}")
    counts = {i: 0 for i in range(3, m + 1)}
    core = two_core(g)
    if not core:
        return counts

    nbrs = {x: tuple(y for y in g.adjacency[x] if y in core) for x in core}

    def extend(root: int, path: List[int], on_path: Set[int]):
        last = path[-1]
        for y in nbrs[last]:
            if y == root:
                if len(path) >= 3 and path[1] < path[-1]:
                    counts[len(path)] += 1
            elif y > root and y not in on_path and len(path) < m:
                path.append(y)
                on_path.add(y)
                extend(root, path, on_path)
                on_path.discard(y)
                path.pop()

    for root in sorted(core):
        extend(root, [root], {root})
    return counts


def unique_cycle_length(g: Graph, vertices: Iterable[int]) -> Extended:
    """Length of the cycle of a unicyclic vertex set; the girth of any core vertex."""
    members = set(vertices)
    core = [x for x in two_core(g) if x in members]
    if not core:
        return INF
    return girth_vertex(g, core[0])


def adjacency_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=bool)
    for u, v in g.edge_list:
        a[u, v] = True
        a[v, u] = True
    return a


def is_complete(g: Graph) -> bool:
    return g.edge_count == g.n * (g.n - 1) // 2


def is_pawful(g: Graph) -> PawfulCheck:
    """
    Diameter at most two, and every x, y, z with d(x,y) = d(y,z) = 2 and
    d(z,x) = 1 has a vertex adjacent to all three.
    """
    if g.n <= 2:
        if g.n == 2 and not g.has_edge(0, 1):
            return PawfulCheck(pawful=False, diameter_witness=(0, 1))
        return PawfulCheck(pawful=True)
    a = adjacency_matrix(g)
    af = a.astype(np.float32)
    two_step = (af @ af) > 0
    reach = a | two_step | np.eye(g.n, dtype=bool)
    if not reach.all():
        x, y = np.argwhere(~reach)[0]
        return PawfulCheck(pawful=False, diameter_witness=(int(x), int(y)))

    at_two = ~(a | np.eye(g.n, dtype=bool))
    for y in range(g.n):
        far = np.flatnonzero(at_two[y])
        near = np.flatnonzero(a[y])
        if len(far) < 2:
            continue
        sub = a[np.ix_(far, far)]
        if not sub.any():
            continue
        through_y = af[np.ix_(far, near)]
        common = (through_y @ through_y.T) > 0
        bad = np.argwhere(np.triu(sub & ~common, 1))
        if len(bad):
            i, j = bad[0]
            return PawfulCheck(
                pawful=False, triple_witness=(int(far[i]), y, int(far[j]))
            )
    return PawfulCheck(pawful=True)


def diameter(g: Graph) -> Extended:
    return all_pairs_distances(g).diameter
