"""Rendering of command results as CSV, JSON or text.

Rationals are written as separate numerator/denominator integers. Optional
rationals become {"num", "den"} objects in JSON and "p/q" cells in CSV or
text, empty when absent. Floats keep 12 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

from ricci_gluing.config import FLOAT_SIGNIFICANT_DIGITS, SCHEMA_VERSION
from ricci_gluing.curvature import CurvatureReport
from ricci_gluing.spectral import CheegerReport, SpectralReport
from ricci_gluing.verify import CheckResult, SweepRow, VerificationSummary

Row = dict[str, object]


def _json_default(value: object) -> object:
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def _float(value: float) -> float:
    return float(format(value, f".{FLOAT_SIGNIFICANT_DIGITS}g"))


def _vertex_set(vertices: Iterable[int]) -> str:
    return " ".join(str(vertex) for vertex in vertices)


def curvature_rows(reports: Iterable[CurvatureReport], labels: Mapping[int, str] | None = None) -> list[Row]:
    rows = []
    for report in reports:
        row: Row = {
            "x": report.x,
            "y": report.y,
            "kappa_num": report.kappa.numerator,
            "kappa_den": report.kappa.denominator,
            "jl_lower": report.jl_lower,
            "jl_upper": report.jl_upper,
            "W_num": report.wasserstein.numerator,
            "W_den": report.wasserstein.denominator,
        }
        if labels is not None:
            row["x_label"] = labels[report.x]
            row["y_label"] = labels[report.y]
        rows.append(row)
    return rows


def sweep_rows(rows: Iterable[SweepRow]) -> list[Row]:
    return [
        {
            "n": row.n,
            "m": row.m,
            "kappa_min_num": row.kappa_min.numerator,
            "kappa_min_den": row.kappa_min.denominator,
            "argmin_x": row.argmin[0],
            "argmin_y": row.argmin[1],
            "argmin_class": row.argmin_class.value,
            "positive": row.positive,
            "is_M": row.is_smallest_positive,
        }
        for row in rows
    ]


def check_rows(checks: Iterable[CheckResult]) -> list[Row]:
    return [
        {
            "suite": check.suite,
            "subject": check.subject,
            "expected": check.expected,
            "actual": check.actual,
            "passed": check.passed,
            "required": check.required,
            "detail": check.detail,
        }
        for check in checks
    ]


def verification_totals(summary: VerificationSummary) -> Row:
    failure = summary.first_failure
    return {
        "passed": summary.passed,
        "checks": len(summary.required),
        "failures": len(summary.failures),
        "first_failure": None if failure is None else f"{failure.suite} {failure.subject}",
    }


def spectral_row(report: SpectralReport) -> Row:
    holds = report.sandwich_holds
    return {
        "lambda1": _float(report.lambda1),
        "unnormalized_gap": _float(report.unnormalized_gap),
        "eigen_residual": _float(report.eigen_residual),
        "kappa_min_num": report.kappa_min.numerator,
        "kappa_min_den": report.kappa_min.denominator,
        "sandwich": "n/a" if holds is None else ("holds" if holds else "fails"),
    }


def cheeger_row(cheeger: CheegerReport, phi: CheegerReport, strict: bool) -> Row:
    return {
        "h_num": cheeger.value.numerator,
        "h_den": cheeger.value.denominator,
        "h_set": _vertex_set(cheeger.argmin_set),
        "strict": strict,
        "phi_num": phi.value.numerator,
        "phi_den": phi.value.denominator,
        "phi_set": _vertex_set(phi.argmin_set),
    }


def _cell(value: object) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def to_csv(rows: list[Row]) -> str:
    if not rows:
        return ""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _cell(value) for key, value in row.items()})
    return buffer.getvalue()


def to_json(command: str, rows: list[Row], summary: Row | None = None) -> str:
    payload: dict[str, object] = {"schema": SCHEMA_VERSION, "command": command, "rows": rows}
    if summary is not None:
        payload["summary"] = summary
    return json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n"


def to_text(rows: list[Row], summary: Row | None = None) -> str:
    lines = [" ".join(f"{key}={_cell(value)}" for key, value in row.items()) for row in rows]
    if summary is not None:
        lines.append(" ".join(f"{key}={_cell(value)}" for key, value in summary.items()))
    return "\n".join(lines) + "\n" if lines else ""


def render(command: str, rows: list[Row], output_format: str, summary: Row | None = None) -> str:
    if output_format == "json":
        return to_json(command, rows, summary)
    if output_format == "csv":
        return to_csv(rows)
    return to_text(rows, summary)


def write_report(text: str, output_path: Path | None, stream: io.TextIOBase) -> None:
    """Write to ``output_path`` or, when it is None, to ``stream``."""
    if output_path is None:
        stream.write(text)
        stream.flush()
        return
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text(text, encoding="utf-8")
