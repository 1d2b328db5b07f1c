"""The rational simplex oracle against the flow solver."""

from fractions import Fraction
from pathlib import Path
import sys

import networkx as nx
import numpy as np
import pytest

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))

from ricci_gluing.config import DEFAULT_SEED  # noqa: E402
from ricci_gluing.errors import OracleTooLargeError  # noqa: E402
from ricci_gluing.graph import (  # noqa: E402
    VertexMeasure,
    complete_graph,
    cycle_graph,
    from_networkx,
    path_graph,
    random_walk_measure,
)
from ricci_gluing.simplex import RationalSimplex, UnboundedProgramError, wasserstein_bruteforce  # noqa: E402
from ricci_gluing.transport import validate_plan, wasserstein  # noqa: E402

RANDOM_PAIRS = 200


def _random_connected_graph(rng: np.random.Generator):
    vertices = int(rng.integers(3, 13))
    while True:
        graph = nx.gnp_random_graph(vertices, 0.35, seed=int(rng.integers(0, 2**31)))
        if nx.is_connected(graph):
            return from_networkx(graph)


def _random_measure(rng: np.random.Generator, vertex_count: int) -> VertexMeasure:
    size = int(rng.integers(1, min(vertex_count, 6) + 1))
    support = rng.choice(vertex_count, size=size, replace=False)
    weights = rng.integers(1, 10, size=size)
    return VertexMeasure.from_weights({int(v): int(w) for v, w in zip(support, weights)})


def test_simplex_solves_small_program() -> None:
    # min x + 2y subject to x + y = 1
    result = RationalSimplex([[1, 1]], [1], [1, 2]).solve()

    assert result.value == 1
    assert result.solution == (Fraction(1), Fraction(0))


def test_simplex_handles_redundant_rows() -> None:
    result = RationalSimplex([[1, 1], [2, 2]], [3, 6], [2, 1]).solve()
    assert result.value == 3


def test_simplex_reports_unbounded_programs() -> None:
    with pytest.raises(UnboundedProgramError):
        RationalSimplex([[1, -1]], [0], [-1, 0]).solve()


def test_oracle_on_path_point_masses() -> None:
    g = path_graph(5)
    assert wasserstein_bruteforce(g, VertexMeasure.point_mass(0), VertexMeasure.point_mass(4)) == 4


def test_oracle_rejects_large_supports() -> None:
    g = complete_graph(14)
    mu = VertexMeasure.from_weights({v: 1 for v in range(7)})
    nu = VertexMeasure.from_weights({v: 1 for v in range(7, 14)})

    with pytest.raises(OracleTooLargeError):
        wasserstein_bruteforce(g, mu, nu)


def test_flow_solver_matches_oracle_on_random_pairs() -> None:
    rng = np.random.default_rng(DEFAULT_SEED)
    for _ in range(RANDOM_PAIRS):
        g = _random_connected_graph(rng)
        mu = _random_measure(rng, g.vertex_count)
        nu = _random_measure(rng, g.vertex_count)

        flow_value, _ = wasserstein(g, mu, nu)
        assert flow_value == wasserstein_bruteforce(g, mu, nu), (g.edges, mu, nu)


@pytest.mark.parametrize(
    ("graph", "pair", "expected"),
    [
        (complete_graph(4), (0, 1), Fraction(1, 3)),
        (cycle_graph(5), (0, 1), Fraction(1)),
        (cycle_graph(5), (0, 2), Fraction(1, 2)),
    ],
    ids=["K4-edge", "C5-adjacent", "C5-distance-two"],
)
def test_oracle_on_neighbourhood_measures(graph, pair, expected: Fraction) -> None:
    x, y = pair
    mu, nu = random_walk_measure(graph, x), random_walk_measure(graph, y)

    assert wasserstein_bruteforce(graph, mu, nu) == expected
    assert wasserstein(graph, mu, nu)[0] == expected


def test_transport_metric_properties_on_random_graphs() -> None:
    rng = np.random.default_rng(DEFAULT_SEED + 1)
    for _ in range(60):
        g = _random_connected_graph(rng)
        x, y, z = (int(v) for v in rng.choice(g.vertex_count, size=3, replace=False))
        mu, nu, rho = (random_walk_measure(g, v) for v in (x, y, z))

        w_xy, plan = wasserstein(g, mu, nu)
        w_yx, _ = wasserstein(g, nu, mu)
        w_yz, _ = wasserstein(g, nu, rho)
        w_xz, _ = wasserstein(g, mu, rho)

        assert w_xy == w_yx, g.edges
        assert w_xz <= w_xy + w_yz, g.edges
        assert validate_plan(g, mu, nu, plan.entries).cost == w_xy
