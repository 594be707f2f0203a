"""
Erdős–Rényi sampling with per-trial random streams, and the auxiliary
samplers used by verification and the dense-regime experiment.
"""

import math
from typing import List, Optional, Set

import numpy as np

from src.application.graph_service import bfs_distances
from src.domain.exceptions import ArgumentError
from src.domain.models import Graph

# Expected degree below which pairs are visited by geometric skipping
SPARSE_DEGREE_CUTOFF = 8.0


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent PCG64 stream owned by one (seed, trial) pair."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def _sparse_edges(n: int, p: float, rng: np.random.Generator) -> List[tuple]:
    # Pairs (w, v) with w < v in row-major order; each skip is geometric.
    edges = []
    log_q = math.log1p(-p)
    v, w = 1, -1
    while v < n:
        w += 1 + int(math.log1p(-rng.random()) / log_q)
        while w >= v and v < n:
            w -= v
            v += 1
        if v < n:
            edges.append((w, v))
    return edges


def _dense_edges(n: int, p: float, rng: np.random.Generator) -> List[tuple]:
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(rows.shape[0]) < p
    return list(zip(rows[keep].tolist(), cols[keep].tolist()))


def sample_er(n: int, p: float, rng: np.random.Generator) -> Graph:
    """G(n, p): every pair is an edge independently with probability p."""
    if n < 1:
        raise ArgumentError(f"n must be positive, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"p must lie in [0, 1], got {p}")
    if p == 0.0 or n == 1:
        edges = []
    elif p == 1.0:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    elif p * n < SPARSE_DEGREE_CUTOFF:
        edges = _sparse_edges(n, p, rng)
    else:
        edges = _dense_edges(n, p, rng)
    return Graph.from_edges(n, edges)


def replay_trial(n: int, p: float, seed: int, trial: int) -> Graph:
    return sample_er(n, p, trial_rng(seed, trial))


def sample_bounded_girth(n: int, max_degree: int, min_girth: int, rng: np.random.Generator,
                         attempts: Optional[int] = None) -> Graph:
    """
    Random graph with degrees <= max_degree and girth >= min_girth.

    Random pairs are proposed and kept when both endpoints have spare degree
    and sit at distance at least min_girth - 1.
    """
    if n < 1 or max_degree < 0:
        raise ArgumentError("need n >= 1 and max_degree >= 0")
    if min_girth < 3:
        raise ArgumentError(f"min_girth must be at least 3, got {min_girth}")
    attempts = attempts if attempts is not None else 20 * n * max(max_degree, 1)
    adjacency: List[Set[int]] = [set() for _ in range(n)]
    current = Graph.from_edges(n, [])
    edges = []
    for _ in range(attempts if n > 1 else 0):
        u, v = (int(a) for a in rng.choice(n, size=2, replace=False))
        if v in adjacency[u] or len(adjacency[u]) >= max_degree or len(adjacency[v]) >= max_degree:
            continue
        reached = bfs_distances(current, u, target=v, limit=min_girth - 2)
        if v in reached:
            continue
        adjacency[u].add(v)
        adjacency[v].add(u)
        edges.append((u, v))
        current = Graph(n=n, adjacency=tuple(tuple(sorted(a)) for a in adjacency))
    return Graph.from_edges(n, edges)


def dense_regime_p(n: int, eps: float = 0.5) -> float:
    """((3 + eps) ln n / n)^{1/3}, capped at 1."""
    if n < 2:
        raise ArgumentError(f"dense regime needs n >= 2, got {n}")
    if eps <= 0:
        raise ArgumentError(f"eps must be positive, got {eps}")
    return min(1.0, ((3.0 + eps) * math.log(n) / n) ** (1.0 / 3.0))
