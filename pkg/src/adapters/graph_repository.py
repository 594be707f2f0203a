import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from src.domain.exceptions import GraphParseError, GraphValidationError
from src.domain.models import Graph
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def parse_graph(text: str, allow_labels: bool = False) -> Graph:
    """
    Parse an edge-list document.

    Each non-blank line is either `u v` or the header `n <count>`; text after
    `#` is a comment. With `allow_labels`, tokens are arbitrary names mapped
    to ids in order of first appearance.
    """
    header: Optional[int] = None
    edges: List[Tuple[int, int]] = []
    labels: Dict[str, int] = {}
    max_id = -1

    def vertex_id(token: str, line_number: int) -> int:
        if allow_labels:
            return labels.setdefault(token, len(labels))
        try:
            value = int(token)
        except ValueError:
            raise GraphParseError(f"vertex id {token!r} is not an integer", line_number)
        if value < 0:
            raise GraphParseError(f"vertex id {value} is negative", line_number)
        return value

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "n":
            if len(tokens) != 2:
                raise GraphParseError("header must read 'n <count>'", line_number)
            if header is not None:
                raise GraphParseError("duplicate 'n' header", line_number)
            try:
                header = int(tokens[1])
            except ValueError:
                raise GraphParseError(f"vertex count {tokens[1]!r} is not an integer", line_number)
            if header < 0:
                raise GraphParseError("vertex count is negative", line_number)
            continue
        if len(tokens) != 2:
            raise GraphParseError(f"expected 'u v', got {line!r}", line_number)
        u = vertex_id(tokens[0], line_number)
        v = vertex_id(tokens[1], line_number)
        if u == v:
            raise GraphValidationError(f"line {line_number}: self-loop at vertex {tokens[0]}")
        edges.append((u, v))
        max_id = max(max_id, u, v)

    if allow_labels:
        n = max(header or 0, len(labels))
        names = sorted(labels, key=labels.get)
        names += [str(i) for i in range(len(names), n)]
        if n == 0:
            raise GraphValidationError("graph has an empty vertex set")
        return Graph.from_edges(n, edges, names)

    n = max(header or 0, max_id + 1)
    if n == 0:
        raise GraphValidationError("graph has an empty vertex set")
    logger.debug(f"Parsed graph with {n} vertices and {len(edges)} edge lines")
    return Graph.from_edges(n, edges)


def format_graph(g: Graph) -> str:
    """Edge-list text with a header and edges in lexicographic order."""
    lines = [f"n {g.n}"]
    lines.extend(f"{g.label(u)} {g.label(v)}" for u, v in g.edge_list)
    return "\n".join(lines) + "\n"


def read_graph(path: Union[str, Path], allow_labels: bool = False) -> Graph:
    """Read a graph file; '-' reads standard input."""
    if str(path) == "-":
        return parse_graph(sys.stdin.read(), allow_labels=allow_labels)
    text = Path(path).read_text(encoding="utf-8")
    logger.info(f"Read graph file {path}")
    return parse_graph(text, allow_labels=allow_labels)

