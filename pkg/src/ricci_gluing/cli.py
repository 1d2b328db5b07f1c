"""Command-line driver.

    PYTHONPATH=src python -m ricci_gluing curvature --gluing n=6,m=5 --format csv
    PYTHONPATH=src python -m ricci_gluing verify --n 5..9 --jobs 4

Exit codes: 0 success, 1 verification counterexample, 2 invalid input or usage.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from ricci_gluing.config import (
    DEFAULT_EXPERIMENT_NAME,
    DEFAULT_N_RANGE,
    JOBS_ENV_VAR,
    OUTPUT_FORMATS,
    RunConfig,
)
from ricci_gluing.curvature import edge_curvatures
from ricci_gluing.errors import InvalidInputError, RicciGluingError
from ricci_gluing.gluing import build_gluing
from ricci_gluing.graph import Graph, read_edge_list
from ricci_gluing.metrics import write_metrics
from ricci_gluing.report import (
    check_rows,
    cheeger_row,
    curvature_rows,
    render,
    spectral_row,
    sweep_rows,
    verification_totals,
    write_report,
)
from ricci_gluing.spectral import cheeger_constant, conductance, normalized_laplacian_gap
from ricci_gluing.verify import run_verification, sweep_gluing

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_INVALID_INPUT = 2


def _progress(message: str) -> None:
    print(f"==> {message}", file=sys.stderr, flush=True)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", default="text", choices=OUTPUT_FORMATS)
    common.add_argument("--output", default="-", help="Report path, '-' for stdout.")
    common.add_argument(
        "--jobs",
        type=int,
        default=None,
        help=f"Worker processes (default: ${JOBS_ENV_VAR} or 1).",
    )
    common.add_argument("--metrics-path", default=None, help="Write Prometheus textfile metrics here.")
    common.add_argument("--track", action="store_true", help="Log the run to MLflow.")
    common.add_argument("--experiment", default=DEFAULT_EXPERIMENT_NAME)
    common.add_argument("--mlflow-uri", default=None)
    common.add_argument("--verbose", action="store_true", help="Enable debug logging.")

    graph_source = argparse.ArgumentParser(add_help=False)
    graph_source.add_argument("--input", default=None, help="Edge-list file.")
    graph_source.add_argument("--gluing", default=None, help="Gluing graph as n=<int>,m=<int>.")

    n_range = argparse.ArgumentParser(add_help=False)
    n_range.add_argument("--n", default=f"{DEFAULT_N_RANGE[0]}..{DEFAULT_N_RANGE[1]}", help="Block sizes a..b.")
    n_range.add_argument("--m", default=None, help="Spoke counts a..b (default: all valid).")

    parser = argparse.ArgumentParser(
        prog="ricci_gluing",
        description="Exact Ollivier-Ricci curvature and gluing-graph verification.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser(
        "curvature", parents=[common, graph_source], help="Curvature of every edge."
    )
    commands.add_parser(
        "gluing-sweep", parents=[common, n_range], help="Minimum edge curvature per (n, m)."
    )
    verify = commands.add_parser("verify", parents=[common, n_range], help="Run the verification suites.")
    verify.add_argument(
        "--inject-off-by-one",
        action="store_true",
        help="Lower the positivity threshold by one (negative control).",
    )
    commands.add_parser(
        "spectral", parents=[common, graph_source], help="Normalized Laplacian gap and curvature sandwich."
    )
    cheeger = commands.add_parser(
        "cheeger", parents=[common, graph_source], help="Exact Cheeger constant and conductance."
    )
    cheeger.add_argument(
        "--non-strict",
        action="store_true",
        help="Allow |A| = |V|/2 in the Cheeger minimum.",
    )
    return parser


def _load_graph(config: RunConfig) -> Graph:
    if config.input_path is not None:
        _progress(f"Reading {config.input_path}")
        return read_edge_list(config.input_path)
    _progress(f"Building gluing graph {config.gluing}")
    return build_gluing(config.gluing)


def cmd_curvature(config: RunConfig) -> tuple[int, str, dict[str, float]]:
    g = _load_graph(config)
    reports = edge_curvatures(g, jobs=config.jobs)
    labels = None
    if config.gluing is not None and config.output_format == "text":
        labels = {vertex: config.gluing.label(vertex) for vertex in range(g.vertex_count)}
    rows = curvature_rows(reports, labels)
    kappa_min = min(report.kappa for report in reports)
    _progress(f"Computed {len(reports)} edge curvatures, minimum {kappa_min}")
    return EXIT_OK, render(config.command, rows, config.output_format), {
        "edges": len(reports),
        "kappa_min": float(kappa_min),
    }


def cmd_gluing_sweep(config: RunConfig) -> tuple[int, str, dict[str, float]]:
    rows = sweep_gluing(config.n_values, config.m_values, jobs=config.jobs)
    positive = sum(1 for row in rows if row.positive)
    _progress(f"Swept {len(rows)} gluing graphs, {positive} positively curved")
    return EXIT_OK, render(config.command, sweep_rows(rows), config.output_format), {
        "graphs": len(rows),
        "positive_graphs": positive,
    }


def cmd_verify(config: RunConfig) -> tuple[int, str, dict[str, float]]:
    m_values = config.m_values if config.m_range is not None else None
    summary, _ = run_verification(
        config.n_values,
        m_values=m_values,
        jobs=config.jobs,
        inject_off_by_one=config.inject_off_by_one,
    )
    totals = verification_totals(summary)
    text = render(config.command, check_rows(summary.checks), config.output_format, summary=totals)
    metrics = {"checks": totals["checks"], "failures": totals["failures"]}

    failure = summary.first_failure
    if failure is not None:
        _progress(
            f"FAIL {failure.suite} {failure.subject}: expected {failure.expected}, got {failure.actual}"
        )
        return EXIT_COUNTEREXAMPLE, text, metrics
    _progress(f"PASS {totals['checks']} checks")
    return EXIT_OK, text, metrics


def cmd_spectral(config: RunConfig) -> tuple[int, str, dict[str, float]]:
    g = _load_graph(config)
    report = normalized_laplacian_gap(g, jobs=config.jobs)
    _progress(f"lambda1={report.lambda1:.12g} kappa_min={report.kappa_min}")
    return EXIT_OK, render(config.command, [spectral_row(report)], config.output_format), {
        "lambda1": report.lambda1,
        "kappa_min": float(report.kappa_min),
    }


def cmd_cheeger(config: RunConfig) -> tuple[int, str, dict[str, float]]:
    g = _load_graph(config)
    h = cheeger_constant(g, strict=config.strict_cheeger)
    phi = conductance(g)
    _progress(f"h={h.value} phi={phi.value}")
    row = cheeger_row(h, phi, strict=config.strict_cheeger)
    return EXIT_OK, render(config.command, [row], config.output_format), {
        "cheeger": float(h.value),
        "conductance": float(phi.value),
    }


HANDLERS = {
    "curvature": cmd_curvature,
    "gluing-sweep": cmd_gluing_sweep,
    "verify": cmd_verify,
    "spectral": cmd_spectral,
    "cheeger": cmd_cheeger,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = RunConfig.from_args(args)
    except InvalidInputError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT

    try:
        code, text, metrics = HANDLERS[config.command](config)
        write_report(text, config.output_path, sys.stdout)
        if config.output_path is not None:
            _progress(f"Report written to {config.output_path}")
        if config.track:
            from ricci_gluing.tracking import log_run

            run_id = log_run(config, metrics, artifact=config.output_path)
            _progress(f"Logged MLflow run {run_id}")
        return code
    except InvalidInputError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except RicciGluingError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    finally:
        if config.metrics_path is not None:
            write_metrics(config.metrics_path)


if __name__ == "__main__":
    raise SystemExit(main())
