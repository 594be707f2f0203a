import networkx as nx
import pytest
from hypothesis import strategies as st

from src.domain.models import Graph


def from_nx(h: nx.Graph) -> Graph:
    """Relabel a networkx graph to ids 0..n-1 in sorted node order."""
    h = nx.convert_node_labels_to_integers(h, ordering="sorted")
    return Graph.from_edges(h.number_of_nodes(), h.edges())


def cycle(n: int) -> Graph:
    return from_nx(nx.cycle_graph(n))


def path(n: int) -> Graph:
    return from_nx(nx.path_graph(n))


def complete(n: int) -> Graph:
    return from_nx(nx.complete_graph(n))


def paw() -> Graph:
    return Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])


@st.composite
def small_graphs(draw, min_n: int = 1, max_n: int = 6) -> Graph:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@pytest.fixture
def petersen() -> Graph:
    return from_nx(nx.petersen_graph())


@pytest.fixture
def cube() -> Graph:
    return from_nx(nx.hypercube_graph(3))


@pytest.fixture
def graph_file(tmp_path):
    def write(text: str, name: str = "g.edges") -> str:
        target = tmp_path / name
        target.write_text(text, encoding="utf-8")
        return str(target)

    return write
