"""Eigensolver, Laplacian gap and Cheeger enumeration."""

from fractions import Fraction
import math
from pathlib import Path
import sys

import networkx as nx
import numpy as np
import pytest

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))

from ricci_gluing.config import FLOAT_TOLERANCE  # noqa: E402
from ricci_gluing.errors import GraphTooLargeForExhaustiveError, GraphTooSmallError  # noqa: E402
from ricci_gluing.gluing import GluingSpec, build_gluing  # noqa: E402
from ricci_gluing.graph import complete_graph, cycle_graph, from_networkx, path_graph  # noqa: E402
from ricci_gluing.spectral import (  # noqa: E402
    cheeger_constant,
    combinatorial_laplacian,
    conductance,
    jacobi_eigh,
    normalized_laplacian,
    normalized_laplacian_gap,
    sandwich_bracket,
    verify_sandwich,
)


def test_jacobi_matches_numpy_on_random_symmetric_matrix() -> None:
    rng = np.random.default_rng(1337)
    raw = rng.normal(size=(8, 8))
    matrix = raw + raw.T
    values, vectors = jacobi_eigh(matrix)

    assert np.allclose(values, np.linalg.eigvalsh(matrix), atol=1e-10)
    assert np.allclose(matrix @ vectors, vectors * values, atol=1e-10)
    assert np.allclose(vectors.T @ vectors, np.eye(8), atol=1e-10)


def test_jacobi_on_diagonal_matrix_needs_no_rotation() -> None:
    values, vectors = jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
    assert values.tolist() == [1.0, 2.0, 3.0]
    assert np.array_equal(np.abs(vectors), np.eye(3)[:, [1, 2, 0]])


def test_normalized_laplacian_is_conjugate_of_random_walk_laplacian() -> None:
    g = build_gluing(GluingSpec(5, 2))
    adjacency = nx.to_numpy_array(g.to_networkx(), nodelist=range(g.vertex_count))
    degrees = adjacency.sum(axis=1)
    random_walk = np.eye(g.vertex_count) - adjacency / degrees[:, None]
    root = np.diag(np.sqrt(degrees))

    assert np.allclose(normalized_laplacian(g), root @ random_walk @ np.linalg.inv(root))
    assert np.array_equal(combinatorial_laplacian(g).sum(axis=1), np.zeros(g.vertex_count))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_complete_graph_gap(n: int) -> None:
    report = normalized_laplacian_gap(complete_graph(n))
    assert math.isclose(report.lambda1, n / (n - 1), abs_tol=FLOAT_TOLERANCE)


def test_path_and_cycle_spectra() -> None:
    path = normalized_laplacian_gap(path_graph(3))
    assert np.allclose(path.eigenvalues, [0.0, 1.0, 2.0], atol=1e-10)
    assert path.sandwich_holds is None

    cycle = normalized_laplacian_gap(cycle_graph(5))
    assert math.isclose(cycle.lambda1, 1 - math.cos(2 * math.pi / 5), abs_tol=1e-10)
    assert cycle.eigen_residual <= 1e-10


@pytest.mark.parametrize(
    ("n", "lambda1"),
    [
        (5, 0.352781491633),
        (6, 0.301895425483),
        (7, 0.233807162079),
        (8, 0.211903442941),
        (9, 0.193023609862),
    ],
)
def test_gap_at_smallest_positive_m(n: int, lambda1: float) -> None:
    m = n - 2 if n <= 6 else n - 3
    report = normalized_laplacian_gap(build_gluing(GluingSpec(n, m)))

    assert math.isclose(report.lambda1, lambda1, abs_tol=1e-11)
    assert report.sandwich_holds


def test_gap_needs_two_vertices() -> None:
    with pytest.raises(GraphTooSmallError):
        normalized_laplacian_gap(complete_graph(1))


@pytest.mark.parametrize(
    ("graph", "value", "argmin"),
    [
        (complete_graph(4), Fraction(3), (0,)),
        (path_graph(3), Fraction(1), (0,)),
        (complete_graph(5), Fraction(3), (0, 1)),
        (cycle_graph(6), Fraction(1), (0, 1)),
    ],
)
def test_cheeger_constant(graph, value: Fraction, argmin) -> None:
    report = cheeger_constant(graph)
    assert report.value == value
    assert report.argmin_set == argmin


def test_non_strict_cheeger_allows_halves() -> None:
    assert cheeger_constant(complete_graph(4), strict=False).value == 2
    assert cheeger_constant(cycle_graph(6), strict=False).value == Fraction(2, 3)


def test_cheeger_argmin_recount_matches_networkx() -> None:
    g = build_gluing(GluingSpec(6, 4))
    report = cheeger_constant(g)
    graph = g.to_networkx()
    assert Fraction(nx.cut_size(graph, report.argmin_set), len(report.argmin_set)) == report.value


def test_conductance_of_complete_graph_meets_chung_lower_bound() -> None:
    g = complete_graph(4)
    phi = conductance(g)
    lambda1 = normalized_laplacian_gap(g).lambda1

    assert phi.value == Fraction(2, 3)
    assert abs(float(phi.value) - lambda1 / 2) <= FLOAT_TOLERANCE


def test_exhaustive_limits() -> None:
    big = from_networkx(nx.path_graph(21))
    with pytest.raises(GraphTooLargeForExhaustiveError):
        cheeger_constant(big)
    with pytest.raises(GraphTooLargeForExhaustiveError):
        conductance(big)
    with pytest.raises(GraphTooSmallError):
        cheeger_constant(path_graph(2))


@pytest.mark.parametrize(
    ("n", "h", "phi"),
    [
        (5, Fraction(7, 4), Fraction(7, 27)),
        (6, Fraction(9, 5), Fraction(9, 39)),
        (7, Fraction(5, 3), Fraction(9, 51)),
        (8, Fraction(12, 7), Fraction(11, 67)),
        (9, Fraction(7, 4), Fraction(13, 85)),
    ],
)
def test_sandwich_at_smallest_positive_m(n: int, h: Fraction, phi: Fraction) -> None:
    report = verify_sandwich(n)

    assert report.cheeger == h
    assert report.conductance == phi
    assert report.holds, report.checks
    assert not report.observations["chung_upper_cheeger"]


def test_bracket_upper_fails_on_cheeger_ratio_for_small_n() -> None:
    assert not verify_sandwich(5).observations["bracket_upper_cheeger"]
    assert verify_sandwich(7).observations["bracket_upper_cheeger"]


def test_sandwich_bracket_values() -> None:
    lower, upper = sandwich_bracket(5)
    assert lower == Fraction(3, 40)
    assert math.isclose(upper, math.sqrt(2 * 17 / 20))

    lower, upper = sandwich_bracket(7)
    assert lower == Fraction(1, 154)
    assert math.isclose(upper, math.sqrt(2 * 153 / 77))
