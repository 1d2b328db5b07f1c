"""Normalized Laplacian spectrum, Cheeger constants and the curvature sandwich."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ricci_gluing.config import (
    CHEEGER_MAX_VERTICES,
    EIGEN_RESIDUAL_LIMIT,
    FLOAT_TOLERANCE,
    JACOBI_MAX_SWEEPS,
    JACOBI_TOLERANCE,
)
from ricci_gluing.curvature import min_edge_curvature
from ricci_gluing.errors import GraphTooLargeForExhaustiveError, GraphTooSmallError
from ricci_gluing.gluing import (
    GluingSpec,
    build_gluing,
    global_lower_bound_at_M,
    positivity_window,
)
from ricci_gluing.graph import Graph

logger = logging.getLogger(__name__)

_CHUNK_BITS = 16


def jacobi_eigh(
    matrix: np.ndarray,
    tol: float = JACOBI_TOLERANCE,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ascending eigenvalues and the matching eigenvectors as columns.
    Sweeps stop once the off-diagonal Frobenius norm drops below ``tol``.
    """
    a = np.array(matrix, dtype=np.float64, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    size = a.shape[0]
    vectors = np.eye(size)

    sweeps = 0
    while float(np.linalg.norm(a - np.diag(np.diag(a)))) >= tol:
        if sweeps == max_sweeps:
            logger.warning("Jacobi iteration did not converge within %d sweeps", max_sweeps)
            break
        sweeps += 1
        for p in range(size - 1):
            for q in range(p + 1, size):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p, vec_q = vectors[:, p].copy(), vectors[:, q].copy()
                vectors[:, p] = c * vec_p - s * vec_q
                vectors[:, q] = s * vec_p + c * vec_q
    logger.debug("Jacobi finished after %d sweeps on a %dx%d matrix", sweeps, size, size)

    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], vectors[:, order]


def normalized_laplacian(g: Graph) -> np.ndarray:
    """Symmetric conjugate I - D^{-1/2} A D^{-1/2} of the random-walk Laplacian I - D^{-1} A."""
    degrees = np.asarray(g.degrees, dtype=np.float64)
    if np.any(degrees == 0):
        raise GraphTooSmallError("normalized Laplacian needs every vertex to have a neighbour")
    scale = 1.0 / np.sqrt(degrees)
    return np.eye(g.vertex_count) - scale[:, None] * g.adjacency_matrix() * scale[None, :]


def combinatorial_laplacian(g: Graph) -> np.ndarray:
    return np.diag(np.asarray(g.degrees, dtype=np.float64)) - g.adjacency_matrix()


def _max_residual(matrix: np.ndarray, values: np.ndarray, vectors: np.ndarray) -> float:
    return float(np.max(np.abs(matrix @ vectors - vectors * values[None, :])))


@dataclass(frozen=True)
class SpectralReport:
    lambda1: float
    kappa_min: Fraction
    eigen_residual: float
    unnormalized_gap: float
    eigenvalues: tuple[float, ...]

    @property
    def sandwich_holds(self) -> bool | None:
        """kappa_min <= lambda1 <= 2 - kappa_min; None when kappa_min <= 0."""
        if self.kappa_min <= 0:
            return None
        kappa = float(self.kappa_min)
        return kappa - FLOAT_TOLERANCE <= self.lambda1 <= 2 - kappa + FLOAT_TOLERANCE


def normalized_laplacian_gap(
    g: Graph, kappa_min: Fraction | None = None, jobs: int = 1
) -> SpectralReport:
    """First nonzero eigenvalue of the normalized Laplacian, with the edge curvature minimum.

    ``kappa_min`` is computed with the transport solver unless supplied.
    """
    if g.vertex_count < 2:
        raise GraphTooSmallError("spectral gap needs at least two vertices")
    laplacian = normalized_laplacian(g)
    values, vectors = jacobi_eigh(laplacian)
    residual = _max_residual(laplacian, values, vectors)
    if residual > EIGEN_RESIDUAL_LIMIT:
        logger.warning("eigen residual %.3e exceeds %.1e", residual, EIGEN_RESIDUAL_LIMIT)

    combinatorial_values, _ = jacobi_eigh(combinatorial_laplacian(g))
    if kappa_min is None:
        kappa_min, _ = min_edge_curvature(g, jobs=jobs)
    return SpectralReport(
        lambda1=float(values[1]),
        kappa_min=kappa_min,
        eigen_residual=residual,
        unnormalized_gap=float(combinatorial_values[1]),
        eigenvalues=tuple(float(value) for value in values),
    )


@dataclass(frozen=True)
class CheegerReport:
    value: Fraction
    argmin_set: tuple[int, ...]


def _cut_blocks(g: Graph):
    """Yield (masks, membership, boundary) for all nonempty proper subsets, block by block."""
    size = g.vertex_count
    total = 1 << size
    edges = np.asarray(g.edges, dtype=np.int64).reshape(-1, 2)
    bit_index = np.arange(size, dtype=np.int64)
    block = 1 << min(_CHUNK_BITS, size)
    for start in range(0, total, block):
        masks = np.arange(max(start, 1), min(start + block, total - 1), dtype=np.int64)
        if masks.size == 0:
            continue
        membership = ((masks[:, None] >> bit_index[None, :]) & 1).astype(np.int8)
        boundary = np.zeros(masks.size, dtype=np.int64)
        for u, v in edges:
            boundary += membership[:, u] != membership[:, v]
        yield masks, membership, boundary


def _exact_minimum(
    g: Graph, numerator_of, denominator_of, admissible_of
) -> CheegerReport:
    best: tuple[Fraction, tuple[int, ...]] | None = None
    for masks, membership, boundary in _cut_blocks(g):
        numerators = numerator_of(boundary)
        denominators = denominator_of(membership)
        keep = admissible_of(membership, denominators)
        if not np.any(keep):
            continue
        numerators, denominators, masks = numerators[keep], denominators[keep], masks[keep]
        pivot = int(np.argmin(numerators / denominators))
        num, den = int(numerators[pivot]), int(denominators[pivot])
        ties = masks[numerators * den == num * denominators]
        subsets = [tuple(v for v in range(g.vertex_count) if (int(mask) >> v) & 1) for mask in ties]
        candidate = (Fraction(num, den), min(subsets))
        if best is None or candidate < best:
            best = candidate
    if best is None:
        raise GraphTooSmallError(f"no admissible vertex subsets on {g.vertex_count} vertices")
    return CheegerReport(value=best[0], argmin_set=best[1])


def _check_enumerable(g: Graph) -> None:
    if g.vertex_count > CHEEGER_MAX_VERTICES:
        raise GraphTooLargeForExhaustiveError(
            f"exhaustive enumeration supports at most {CHEEGER_MAX_VERTICES} vertices, got {g.vertex_count}"
        )


def cheeger_constant(g: Graph, strict: bool = True) -> CheegerReport:
    """Exact min |boundary(A)| / |A| over 0 < |A| < |V|/2 (|A| <= |V|/2 when not strict).

    Ties resolve to the lexicographically least vertex set.
    """
    _check_enumerable(g)
    size = g.vertex_count

    def admissible(membership: np.ndarray, sizes: np.ndarray) -> np.ndarray:
        return 2 * sizes < size if strict else 2 * sizes <= size

    return _exact_minimum(
        g,
        numerator_of=lambda boundary: boundary,
        denominator_of=lambda membership: membership.sum(axis=1, dtype=np.int64),
        admissible_of=admissible,
    )


def conductance(g: Graph) -> CheegerReport:
    """Exact min |boundary(A)| / vol(A) over nonempty A with vol(A) <= vol(V)/2."""
    _check_enumerable(g)
    degrees = np.asarray(g.degrees, dtype=np.int64)
    total_volume = int(degrees.sum())
    return _exact_minimum(
        g,
        numerator_of=lambda boundary: boundary,
        denominator_of=lambda membership: membership.astype(np.int64) @ degrees,
        admissible_of=lambda membership, volumes: 2 * volumes <= total_volume,
    )


@dataclass(frozen=True)
class SandwichReport:
    n: int
    m: int
    kappa_min: Fraction
    global_bound: Fraction
    lambda1: float
    cheeger: Fraction
    conductance: Fraction
    bracket_lower: Fraction
    bracket_upper: float

    @property
    def chung_upper(self) -> float:
        return math.sqrt(2 * self.lambda1)

    @property
    def checks(self) -> dict[str, bool]:
        """Inequalities that must hold; floats compared with FLOAT_TOLERANCE."""
        kappa = float(self.kappa_min)
        tol = FLOAT_TOLERANCE
        return {
            "global_bound": self.kappa_min >= self.global_bound,
            "curvature_sandwich": kappa - tol <= self.lambda1 <= 2 - kappa + tol,
            "chung_lower_cheeger": self.lambda1 / 2 - tol <= float(self.cheeger),
            "chung_lower_conductance": self.lambda1 / 2 - tol <= float(self.conductance),
            "chung_upper_conductance": float(self.conductance) <= self.chung_upper + tol,
            "bracket_lower_cheeger": self.bracket_lower <= self.cheeger,
            "bracket_lower_conductance": self.bracket_lower <= self.conductance,
            "bracket_upper_conductance": float(self.conductance) <= self.bracket_upper + tol,
        }

    @property
    def observations(self) -> dict[str, bool]:
        """Upper bounds tested against the size-normalised Cheeger ratio; these may fail."""
        tol = FLOAT_TOLERANCE
        return {
            "chung_upper_cheeger": float(self.cheeger) <= self.chung_upper + tol,
            "bracket_upper_cheeger": float(self.cheeger) <= self.bracket_upper + tol,
        }

    @property
    def holds(self) -> bool:
        return all(self.checks.values())


def sandwich_bracket(n: int) -> tuple[Fraction, float]:
    """Explicit lower and upper bracket for the Cheeger ratio of the M-gluing graph."""
    bound = global_lower_bound_at_M(n)
    if n > 6:
        upper = Fraction(2 * (4 * n * n - 7 * n + 6), n * (2 * n - 3))
    else:
        upper = Fraction(2 * (n * n - 2 * n + 2), n * (n - 1))
    return bound / 2, math.sqrt(upper)


def verify_sandwich(n: int, jobs: int = 1) -> SandwichReport:
    """Evaluate curvature, spectral and Cheeger quantities of the M-gluing graph for n."""
    window = positivity_window(n)
    spec = GluingSpec(n, window.smallest_positive_m)
    g = build_gluing(spec)
    kappa_min, _ = min_edge_curvature(g, jobs=jobs)
    spectral = normalized_laplacian_gap(g, kappa_min=kappa_min)
    lower, upper = sandwich_bracket(n)
    return SandwichReport(
        n=n,
        m=spec.m,
        kappa_min=kappa_min,
        global_bound=global_lower_bound_at_M(n),
        lambda1=spectral.lambda1,
        cheeger=cheeger_constant(g).value,
        conductance=conductance(g).value,
        bracket_lower=lower,
        bracket_upper=upper,
    )
