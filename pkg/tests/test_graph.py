"""Unit tests for graph construction, measures and edge-list I/O."""

from fractions import Fraction
from pathlib import Path
import sys

import networkx as nx
import pytest

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))

from ricci_gluing.errors import (  # noqa: E402
    DisconnectedGraphError,
    DuplicateEdgeError,
    EdgeListParseError,
    InvalidInputError,
    MeasureNotNormalizedError,
    NotAnEdgeError,
    SelfLoopError,
    VertexOutOfRangeError,
)
from ricci_gluing.gluing import GluingSpec, build_gluing  # noqa: E402
from ricci_gluing.graph import (  # noqa: E402
    VertexMeasure,
    build_graph,
    complete_graph,
    cycle_graph,
    diameter,
    distance,
    format_edge_list,
    from_networkx,
    parse_edge_list,
    random_walk_measure,
    read_edge_list,
    triangle_count,
    write_edge_list,
)

DATA_DIR = Path(__file__).resolve().parents[1] / "data" / "graphs"


def test_build_graph_infers_vertices_and_distances() -> None:
    g = build_graph([(0, 1), (1, 2), (2, 3)])

    assert g.vertex_count == 4
    assert g.edges == ((0, 1), (1, 2), (2, 3))
    assert g.degrees == (1, 2, 2, 1)
    assert distance(g, 0, 3) == 3
    assert diameter(g) == 3
    assert g.distance_matrix[2, 0] == 2


def test_distance_matrix_is_read_only() -> None:
    g = complete_graph(4)
    with pytest.raises(ValueError):
        g.distance_matrix[0, 1] = 5


@pytest.mark.parametrize(
    ("edges", "error"),
    [
        ([(0, 1), (1, 1)], SelfLoopError),
        ([(0, 1), (1, 0)], DuplicateEdgeError),
        ([(0, 1), (2, 3)], DisconnectedGraphError),
        ([(0, -1)], VertexOutOfRangeError),
    ],
)
def test_build_graph_rejects_invalid_edges(edges, error) -> None:
    with pytest.raises(error):
        build_graph(edges)


def test_isolated_vertex_makes_graph_disconnected() -> None:
    with pytest.raises(DisconnectedGraphError):
        build_graph([(0, 1)], vertex_count=3)


def test_invalid_input_errors_are_value_errors() -> None:
    with pytest.raises(ValueError):
        build_graph([(0, 0)])


def test_from_networkx_relabels_sorted_nodes() -> None:
    graph = nx.Graph([("b", "c"), ("a", "b")])
    g = from_networkx(graph)

    assert g.vertex_count == 3
    assert g.edges == ((0, 1), (1, 2))


def test_check_vertex_rejects_out_of_range() -> None:
    g = cycle_graph(5)
    with pytest.raises(VertexOutOfRangeError):
        g.neighbors(5)


def test_triangle_count_on_gluing_cross_spoke() -> None:
    spec = GluingSpec(6, 3)
    g = build_gluing(spec)

    assert triangle_count(g, spec.u(0), spec.v(1)) == 3
    assert triangle_count(complete_graph(5), 0, 1) == 3
    with pytest.raises(NotAnEdgeError):
        triangle_count(g, spec.u(4), spec.v(4))


def test_gluing_distances_and_diameter() -> None:
    spec = GluingSpec(6, 3)
    g = build_gluing(spec)

    assert distance(g, spec.u(4), spec.v(4)) == 3
    assert diameter(g) == 3
    assert diameter(build_gluing(GluingSpec(6, 5))) == 2


def test_random_walk_measure_is_uniform_on_neighbours() -> None:
    g = complete_graph(4)
    measure = random_walk_measure(g, 0)

    assert measure.vertices == (1, 2, 3)
    assert measure.mass(1) == Fraction(1, 3)
    assert measure.mass(0) == 0


def test_vertex_measure_validation() -> None:
    with pytest.raises(MeasureNotNormalizedError):
        VertexMeasure(((0, Fraction(1, 2)),))
    with pytest.raises(MeasureNotNormalizedError):
        VertexMeasure(((0, Fraction(3, 2)), (1, Fraction(-1, 2))))
    with pytest.raises(MeasureNotNormalizedError):
        VertexMeasure(((0, Fraction(1, 2)), (0, Fraction(1, 2))))


def test_vertex_measure_from_weights_normalises() -> None:
    measure = VertexMeasure.from_weights({3: 2, 1: 1, 2: 0})

    assert measure.support == ((1, Fraction(1, 3)), (3, Fraction(2, 3)))
    assert VertexMeasure.point_mass(4).as_dict() == {4: Fraction(1)}


def test_parse_edge_list_skips_comments_and_blank_lines() -> None:
    text = "# header\n0 1\n\n1 2  # trailing comment\n"
    assert parse_edge_list(text) == [(0, 1), (1, 2)]


@pytest.mark.parametrize(
    ("text", "error", "fragment"),
    [
        ("0 1\n1 2 3\n", EdgeListParseError, "line 2"),
        ("0 1\nx 2\n", EdgeListParseError, "line 2"),
        ("0 1\n2 2\n", SelfLoopError, "line 2"),
        ("0 1\n1 2\n1 0\n", DuplicateEdgeError, "line 3"),
    ],
)
def test_parse_edge_list_reports_line_numbers(text, error, fragment) -> None:
    with pytest.raises(error) as excinfo:
        parse_edge_list(text)
    assert fragment in str(excinfo.value)


def test_parse_error_carries_line_number_attribute() -> None:
    with pytest.raises(EdgeListParseError) as excinfo:
        parse_edge_list("0 1\n\n1\n")
    assert excinfo.value.line_number == 3


def test_sample_edge_lists() -> None:
    assert read_edge_list(DATA_DIR / "k5.edges").edge_count == 10
    assert read_edge_list(DATA_DIR / "petersen.edges").degrees == (3,) * 10
    assert read_edge_list(DATA_DIR / "gluing_6_5.edges").edge_count == 41
    with pytest.raises(DisconnectedGraphError):
        read_edge_list(DATA_DIR / "disconnected.edges")
    with pytest.raises(InvalidInputError):
        read_edge_list(DATA_DIR / "missing.edges")


def test_written_gluing_reingests_with_identical_adjacency(tmp_path: Path) -> None:
    g = build_gluing(GluingSpec(5, 2))
    path = tmp_path / "gluing.edges"
    write_edge_list(g, path, header=["gluing n=5,m=2"])

    reloaded = read_edge_list(path)
    assert reloaded.adjacency == g.adjacency
    assert format_edge_list(g).count("\n") == g.edge_count


@pytest.mark.parametrize("name", ["k5.edges", "c5.edges", "petersen.edges", "gluing_6_5.edges"])
def test_distance_is_a_metric_on_sample_graphs(name: str) -> None:
    g = read_edge_list(DATA_DIR / name)
    vertices = range(g.vertex_count)

    for x in vertices:
        assert distance(g, x, x) == 0
        for y in vertices:
            assert distance(g, x, y) == distance(g, y, x)
            if x != y:
                assert distance(g, x, y) >= 1
            for z in vertices:
                assert distance(g, x, z) <= distance(g, x, y) + distance(g, y, z)


@pytest.mark.parametrize("name", ["k5.edges", "c5.edges", "petersen.edges", "gluing_6_5.edges"])
def test_triangle_count_bounded_by_smaller_degree(name: str) -> None:
    g = read_edge_list(DATA_DIR / name)
    for x, y in g.edges:
        assert triangle_count(g, x, y) <= min(g.degree(x), g.degree(y)) - 1


@pytest.mark.parametrize(("n", "m"), [(n, m) for n in range(5, 10) for m in range(1, n)])
def test_gluing_degrees(n: int, m: int) -> None:
    spec = GluingSpec(n, m)
    g = build_gluing(spec)

    assert g.degree(spec.u(0)) == g.degree(spec.v(0)) == n + m
    for vertex in spec.attached_u + spec.attached_v:
        assert g.degree(vertex) == n
    for vertex in spec.free_u + spec.free_v:
        assert g.degree(vertex) == n - 1


def test_random_walk_measure_at_gluing_hub() -> None:
    spec = GluingSpec(6, 3)
    measure = random_walk_measure(build_gluing(spec), spec.u(0))

    expected = [spec.u(i) for i in range(1, 6)] + [spec.v(j) for j in range(0, 4)]
    assert measure.vertices == tuple(sorted(expected))
    assert all(mass == Fraction(1, 9) for _, mass in measure.support)


def test_random_walk_measure_on_single_edge() -> None:
    g = build_graph([(0, 1)])
    assert random_walk_measure(g, 0) == VertexMeasure.point_mass(1)
    assert random_walk_measure(g, 1) == VertexMeasure.point_mass(0)
