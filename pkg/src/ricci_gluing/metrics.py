"""Prometheus counters for solver and verification activity."""

from __future__ import annotations

from pathlib import Path

from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile

REGISTRY = CollectorRegistry()

TRANSPORT_SOLVES = Counter(
    "ricci_transport_solves_total",
    "Exact Wasserstein solves",
    ["method"],
    registry=REGISTRY,
)
TRANSPORT_SOLVE_SECONDS = Histogram(
    "ricci_transport_solve_seconds",
    "Wall time of a single min-cost-flow solve",
    buckets=(0.0005, 0.001, 0.0025, 0.005, 0.01, 0.025, 0.05, 0.1, 0.5),
    registry=REGISTRY,
)
CURVATURE_EVALUATIONS = Counter(
    "ricci_curvature_evaluations_total",
    "Curvature values computed for vertex pairs",
    registry=REGISTRY,
)
VERIFICATION_CHECKS = Counter(
    "ricci_verification_checks_total",
    "Verification checks by suite and outcome",
    ["suite", "outcome"],
    registry=REGISTRY,
)


def record_check(suite: str, passed: bool) -> None:
    VERIFICATION_CHECKS.labels(suite, "pass" if passed else "fail").inc()


def write_metrics(path: Path) -> None:
    """Write the registry in node-exporter textfile format."""
    path.parent.mkdir(parents=True, exist_ok=True)
    write_to_textfile(str(path), REGISTRY)
