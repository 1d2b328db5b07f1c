"""Unit tests for curvature evaluation and the Jost-Liu estimates."""

from fractions import Fraction
from pathlib import Path
import sys

import networkx as nx
import pytest

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))

from ricci_gluing.curvature import (  # noqa: E402
    edge_curvatures,
    jost_liu_lower,
    jost_liu_upper,
    min_edge_curvature,
    min_pair_curvature,
    pair_curvatures,
    ricci_curvature,
)
from ricci_gluing.errors import SameVertexError, VertexOutOfRangeError  # noqa: E402
from ricci_gluing.gluing import GluingSpec, build_gluing  # noqa: E402
from ricci_gluing.graph import complete_graph, cycle_graph, from_networkx, path_graph  # noqa: E402


@pytest.mark.parametrize("n", range(3, 11))
def test_complete_graph_curvature(n: int) -> None:
    reports = edge_curvatures(complete_graph(n))
    assert {report.kappa for report in reports} == {Fraction(n - 2, n - 1)}


def test_cycle_and_petersen_edges() -> None:
    assert ricci_curvature(cycle_graph(5), 0, 1).kappa == 0
    petersen = from_networkx(nx.petersen_graph())
    assert {report.kappa for report in edge_curvatures(petersen)} == {Fraction(-1, 3)}


def test_curvature_is_symmetric() -> None:
    g = build_gluing(GluingSpec(6, 3))
    for x, y in [(0, 6), (0, 7), (1, 5)]:
        assert ricci_curvature(g, x, y).kappa == ricci_curvature(g, y, x).kappa


def test_report_fields_on_top_gluing() -> None:
    spec = GluingSpec(6, 5)
    g = build_gluing(spec)

    cross = ricci_curvature(g, spec.u(0), spec.v(1))
    assert cross.distance == 1
    assert cross.wasserstein == Fraction(25, 33)
    assert cross.kappa == Fraction(8, 33)
    assert cross.within_jost_liu

    bridge = ricci_curvature(g, spec.u(0), spec.v(0))
    assert bridge.kappa == Fraction(10, 11)
    assert bridge.jl_upper == Fraction(10, 11)


def test_jost_liu_values_on_gluing() -> None:
    spec = GluingSpec(6, 3)
    g = build_gluing(spec)

    assert jost_liu_lower(g, spec.u(0), spec.u(1)) == Fraction(7, 18)
    assert ricci_curvature(g, spec.u(0), spec.u(1)).kappa == Fraction(4, 9)
    assert jost_liu_lower(g, spec.u(0), spec.v(1)) == Fraction(-5, 18)
    assert ricci_curvature(g, spec.u(0), spec.v(1)).kappa == 0
    assert jost_liu_upper(g, spec.u(0), spec.v(1)) == Fraction(3, 9)


def test_non_adjacent_pair_has_no_jost_liu_bounds() -> None:
    spec = GluingSpec(6, 3)
    g = build_gluing(spec)
    report = ricci_curvature(g, spec.u(4), spec.v(4))

    assert report.distance == 3
    assert report.kappa == 1 - report.wasserstein / 3
    assert report.jl_lower is None
    assert report.within_jost_liu is None


def test_invalid_pairs() -> None:
    g = path_graph(3)
    with pytest.raises(SameVertexError):
        ricci_curvature(g, 1, 1)
    with pytest.raises(VertexOutOfRangeError):
        ricci_curvature(g, 0, 3)


@pytest.mark.parametrize(
    ("n", "m", "kappa", "edge"),
    [
        (5, 3, Fraction(3, 20), (0, 6)),
        (5, 4, Fraction(13, 45), (0, 1)),
        (6, 3, Fraction(0), (0, 7)),
        (6, 4, Fraction(2, 15), (0, 7)),
        (6, 5, Fraction(8, 33), (0, 1)),
    ],
)
def test_min_edge_curvature_and_argmin(n: int, m: int, kappa: Fraction, edge) -> None:
    assert min_edge_curvature(build_gluing(GluingSpec(n, m))) == (kappa, edge)


@pytest.mark.parametrize(
    ("n", "m", "kappa"),
    [
        (5, 1, Fraction(-17, 30)),
        (5, 2, Fraction(-2, 35)),
        (7, 4, Fraction(1, 77)),
        (8, 5, Fraction(1, 52)),
        (9, 6, Fraction(1, 45)),
    ],
)
def test_min_edge_curvature_values(n: int, m: int, kappa: Fraction) -> None:
    value, _ = min_edge_curvature(build_gluing(GluingSpec(n, m)))
    assert value == kappa


def test_pair_minimum_is_attained_on_edges() -> None:
    g = build_gluing(GluingSpec(5, 3))
    edge_min, _ = min_edge_curvature(g)
    pair_min, _ = min_pair_curvature(g)

    assert pair_min >= edge_min
    assert len(pair_curvatures(g)) == 45


def test_parallel_evaluation_preserves_order() -> None:
    g = build_gluing(GluingSpec(5, 2))
    assert edge_curvatures(g, jobs=2) == edge_curvatures(g, jobs=1)
