"""Immutable simple graphs with a precomputed hop metric, plus vertex measures."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

import networkx as nx
import numpy as np

from ricci_gluing.errors import (
    DisconnectedGraphError,
    DuplicateEdgeError,
    EdgeListParseError,
    InvalidInputError,
    MeasureNotNormalizedError,
    NotAnEdgeError,
    SelfLoopError,
    VertexOutOfRangeError,
)

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected connected simple graph on vertices 0..vertex_count-1.

    ``adjacency[v]`` is the sorted neighbour tuple of v and ``distance_matrix``
    holds hop distances. Build instances with :func:`build_graph`.
    """

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    distance_matrix: np.ndarray

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(neighbors) for neighbors in self.adjacency)

    @property
    def edges(self) -> tuple[Edge, ...]:
        """All edges as (u, v) with u < v, in lexicographic order."""
        return tuple(
            (u, v) for u, neighbors in enumerate(self.adjacency) for v in neighbors if u < v
        )

    @property
    def edge_count(self) -> int:
        return sum(self.degrees) // 2

    def degree(self, vertex: int) -> int:
        self.check_vertex(vertex)
        return len(self.adjacency[vertex])

    def neighbors(self, vertex: int) -> tuple[int, ...]:
        self.check_vertex(vertex)
        return self.adjacency[vertex]

    def has_edge(self, u: int, v: int) -> bool:
        self.check_vertex(u)
        self.check_vertex(v)
        return int(self.distance_matrix[u, v]) == 1

    def check_vertex(self, vertex: int) -> None:
        if not 0 <= vertex < self.vertex_count:
            raise VertexOutOfRangeError(
                f"vertex {vertex} is outside 0..{self.vertex_count - 1}"
            )

    def adjacency_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.vertex_count, self.vertex_count), dtype=np.int64)
        for u, v in self.edges:
            matrix[u, v] = matrix[v, u] = 1
        return matrix

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(self.edges)
        return graph


@dataclass(frozen=True)
class VertexMeasure:
    """Finitely supported probability measure with exact rational masses.

    ``support`` is normalised to a vertex-sorted tuple of (vertex, mass).
    """

    support: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        masses: dict[int, Fraction] = {}
        for vertex, mass in self.support:
            vertex = int(vertex)
            if vertex in masses:
                raise MeasureNotNormalizedError(f"vertex {vertex} appears twice in the support")
            mass = Fraction(mass)
            if mass <= 0:
                raise MeasureNotNormalizedError(f"mass on vertex {vertex} must be positive, got {mass}")
            masses[vertex] = mass
        total = sum(masses.values(), Fraction(0))
        if total != 1:
            raise MeasureNotNormalizedError(f"masses sum to {total}, expected 1")
        object.__setattr__(self, "support", tuple(sorted(masses.items())))

    @classmethod
    def point_mass(cls, vertex: int) -> "VertexMeasure":
        return cls(((vertex, Fraction(1)),))

    @classmethod
    def from_weights(cls, weights: Mapping[int, int | Fraction]) -> "VertexMeasure":
        """Normalise non-negative weights; zero weights are dropped."""
        positive = {v: Fraction(w) for v, w in weights.items() if w != 0}
        if any(w < 0 for w in positive.values()):
            raise MeasureNotNormalizedError("weights must be non-negative")
        total = sum(positive.values(), Fraction(0))
        if total == 0:
            raise MeasureNotNormalizedError("weights sum to zero")
        return cls(tuple((v, w / total) for v, w in positive.items()))

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(vertex for vertex, _ in self.support)

    def mass(self, vertex: int) -> Fraction:
        for candidate, mass in self.support:
            if candidate == vertex:
                return mass
        return Fraction(0)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.support)


def _normalize_edges(edges: Iterable[Edge]) -> list[Edge]:
    normalized: list[Edge] = []
    seen: set[Edge] = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise SelfLoopError(f"self-loop on vertex {u}")
        if u < 0 or v < 0:
            raise VertexOutOfRangeError(f"negative vertex id in edge ({u}, {v})")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge ({key[0]}, {key[1]})")
        seen.add(key)
        normalized.append(key)
    return normalized


def build_graph(edges: Iterable[Edge], vertex_count: int | None = None) -> Graph:
    """Validate an edge list and build a connected Graph with its distance matrix.

    When ``vertex_count`` is omitted it is inferred as the largest id plus one.
    """
    normalized = _normalize_edges(edges)
    if vertex_count is None:
        if not normalized:
            raise InvalidInputError("cannot infer the vertex count of an empty edge list")
        vertex_count = max(v for _, v in normalized) + 1
    if vertex_count < 1:
        raise InvalidInputError(f"vertex_count must be positive, got {vertex_count}")
    for u, v in normalized:
        if v >= vertex_count:
            raise VertexOutOfRangeError(f"edge ({u}, {v}) references a vertex >= {vertex_count}")

    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(vertex_count))
    nx_graph.add_edges_from(normalized)
    if not nx.is_connected(nx_graph):
        components = nx.number_connected_components(nx_graph)
        raise DisconnectedGraphError(f"DisconnectedGraph: graph has {components} connected components")

    distances = np.zeros((vertex_count, vertex_count), dtype=np.int64)
    for source, lengths in nx.all_pairs_shortest_path_length(nx_graph):
        for target, length in lengths.items():
            distances[source, target] = length
    distances.setflags(write=False)

    adjacency = tuple(tuple(sorted(nx_graph.adj[v])) for v in range(vertex_count))
    logger.debug("built graph with %d vertices and %d edges", vertex_count, len(normalized))
    return Graph(vertex_count=vertex_count, adjacency=adjacency, distance_matrix=distances)


def from_networkx(graph: nx.Graph) -> Graph:
    """Relabel a networkx graph to 0..n-1 (sorted node order) and build a Graph."""
    relabeled = nx.convert_node_labels_to_integers(graph, ordering="sorted")
    return build_graph(relabeled.edges(), vertex_count=relabeled.number_of_nodes())


def complete_graph(n: int) -> Graph:
    return from_networkx(nx.complete_graph(n))


def cycle_graph(n: int) -> Graph:
    return from_networkx(nx.cycle_graph(n))


def path_graph(n: int) -> Graph:
    return from_networkx(nx.path_graph(n))


def distance(g: Graph, x: int, y: int) -> int:
    g.check_vertex(x)
    g.check_vertex(y)
    return int(g.distance_matrix[x, y])


def diameter(g: Graph) -> int:
    return int(g.distance_matrix.max())


def triangle_count(g: Graph, x: int, y: int) -> int:
    """Number of triangles through the edge (x, y), i.e. common neighbours."""
    if not g.has_edge(x, y):
        raise NotAnEdgeError(f"({x}, {y}) is not an edge")
    return len(set(g.adjacency[x]).intersection(g.adjacency[y]))


def random_walk_measure(g: Graph, x: int) -> VertexMeasure:
    """Simple random walk measure: mass 1/d_x on each neighbour of x."""
    neighbors = g.neighbors(x)
    if not neighbors:
        raise InvalidInputError(f"vertex {x} has no neighbours")
    mass = Fraction(1, len(neighbors))
    return VertexMeasure(tuple((v, mass) for v in neighbors))


def parse_edge_list(text: str) -> list[Edge]:
    """Parse ``u v`` lines; ``#`` starts a comment. Errors carry line numbers."""
    edges: list[Edge] = []
    seen: dict[Edge, int] = {}
    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(f"expected two vertex ids, got {len(parts)} fields", line_number)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise EdgeListParseError(f"invalid vertex id in {line!r}", line_number) from exc
        if u < 0 or v < 0:
            raise EdgeListParseError(f"vertex ids must be non-negative, got {line!r}", line_number)
        if u == v:
            raise SelfLoopError(f"line {line_number}: self-loop on vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(
                f"line {line_number}: duplicate edge {key} (first seen on line {seen[key]})"
            )
        seen[key] = line_number
        edges.append(key)
    return edges


def read_edge_list(path: Path) -> Graph:
    if not path.exists():
        raise InvalidInputError(f"Edge list not found: {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InvalidInputError(f"Cannot read edge list {path}: {exc}") from exc
    return build_graph(parse_edge_list(text))


def format_edge_list(g: Graph, header: Iterable[str] = ()) -> str:
    lines = [f"# {comment}" for comment in header]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path: Path, header: Iterable[str] = ()) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_edge_list(g, header), encoding="utf-8")
