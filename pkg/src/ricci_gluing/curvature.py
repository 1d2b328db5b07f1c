"""Ollivier-Ricci curvature of vertex pairs and the Jost-Liu edge estimates."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from itertools import combinations
from multiprocessing import Pool

from ricci_gluing.errors import GraphTooSmallError, SameVertexError
from ricci_gluing.graph import Edge, Graph, random_walk_measure, triangle_count
from ricci_gluing.metrics import CURVATURE_EVALUATIONS
from ricci_gluing.transport import wasserstein

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurvatureReport:
    """Exact curvature of (x, y). Jost-Liu bounds are None unless (x, y) is an edge."""

    x: int
    y: int
    distance: int
    wasserstein: Fraction
    kappa: Fraction
    jl_lower: Fraction | None = None
    jl_upper: Fraction | None = None

    @property
    def is_edge(self) -> bool:
        return self.distance == 1

    @property
    def within_jost_liu(self) -> bool | None:
        if self.jl_lower is None or self.jl_upper is None:
            return None
        return self.jl_lower <= self.kappa <= self.jl_upper


def _positive_part(value: Fraction) -> Fraction:
    return value if value > 0 else Fraction(0)


def jost_liu_lower(g: Graph, x: int, y: int) -> Fraction:
    triangles = triangle_count(g, x, y)
    dx, dy = g.degree(x), g.degree(y)
    smaller, larger = min(dx, dy), max(dx, dy)
    base = 1 - Fraction(1, dx) - Fraction(1, dy)
    return (
        -_positive_part(base - Fraction(triangles, smaller))
        - _positive_part(base - Fraction(triangles, larger))
        + Fraction(triangles, larger)
    )


def jost_liu_upper(g: Graph, x: int, y: int) -> Fraction:
    triangles = triangle_count(g, x, y)
    return Fraction(triangles, max(g.degree(x), g.degree(y)))


def ricci_curvature(g: Graph, x: int, y: int) -> CurvatureReport:
    """kappa(x, y) = 1 - W(m_x, m_y) / d(x, y) with exact arithmetic."""
    g.check_vertex(x)
    g.check_vertex(y)
    if x == y:
        raise SameVertexError(f"curvature needs two distinct vertices, got ({x}, {x})")
    hops = int(g.distance_matrix[x, y])
    w, _ = wasserstein(g, random_walk_measure(g, x), random_walk_measure(g, y))
    CURVATURE_EVALUATIONS.inc()
    kappa = 1 - w / hops
    if hops != 1:
        return CurvatureReport(x=x, y=y, distance=hops, wasserstein=w, kappa=kappa)
    return CurvatureReport(
        x=x,
        y=y,
        distance=hops,
        wasserstein=w,
        kappa=kappa,
        jl_lower=jost_liu_lower(g, x, y),
        jl_upper=jost_liu_upper(g, x, y),
    )


def _curvatures(g: Graph, pairs: list[Edge], jobs: int) -> list[CurvatureReport]:
    if jobs <= 1 or len(pairs) < 2:
        return [ricci_curvature(g, x, y) for x, y in pairs]
    chunksize = max(1, len(pairs) // (jobs * 4))
    with Pool(processes=jobs) as pool:
        reports = pool.starmap(partial(ricci_curvature, g), pairs, chunksize=chunksize)
    logger.debug("computed %d curvatures on %d workers", len(reports), jobs)
    return reports


def edge_curvatures(g: Graph, jobs: int = 1) -> list[CurvatureReport]:
    """Curvature of every edge, in ``g.edges`` order regardless of ``jobs``."""
    return _curvatures(g, list(g.edges), jobs)


def pair_curvatures(g: Graph, jobs: int = 1) -> list[CurvatureReport]:
    """Curvature of every unordered vertex pair x < y."""
    return _curvatures(g, list(combinations(range(g.vertex_count), 2)), jobs)


def _minimum(reports: list[CurvatureReport]) -> tuple[Fraction, Edge]:
    best = min(reports, key=lambda report: (report.kappa, report.x, report.y))
    return best.kappa, (best.x, best.y)


def min_edge_curvature(g: Graph, jobs: int = 1) -> tuple[Fraction, Edge]:
    """Smallest edge curvature and the lexicographically smallest edge attaining it."""
    if g.edge_count == 0:
        raise GraphTooSmallError("graph has no edges")
    return _minimum(edge_curvatures(g, jobs))


def min_pair_curvature(g: Graph, jobs: int = 1) -> tuple[Fraction, Edge]:
    if g.vertex_count < 2:
        raise GraphTooSmallError("graph has fewer than two vertices")
    return _minimum(pair_curvatures(g, jobs))
