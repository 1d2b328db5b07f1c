"""Optional MLflow tracking for sweeps and verification runs."""

from __future__ import annotations

from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping

from ricci_gluing.config import RunConfig


def run_name(command: str) -> str:
    return f"{command}-{datetime.now(timezone.utc).strftime('%Y%m%d-%H%M%S')}"


def log_run(
    config: RunConfig,
    metrics: Mapping[str, float],
    artifact: Path | None = None,
) -> str:
    """Log params, metrics and the written report to a new run; return the run id."""
    import warnings

    warnings.filterwarnings(
        "ignore",
        message=r"google\.protobuf\.service module is deprecated.*",
        category=UserWarning,
    )
    warnings.filterwarnings(
        "ignore",
        message=r"pkg_resources is deprecated as an API.*",
        category=UserWarning,
    )

    import mlflow

    if config.mlflow_uri:
        mlflow.set_tracking_uri(config.mlflow_uri)
    mlflow.set_experiment(config.experiment)

    with mlflow.start_run(run_name=run_name(config.command)) as run:
        mlflow.log_params(config.to_params())
        mlflow.log_metrics({key: float(value) for key, value in metrics.items()})
        if artifact is not None and artifact.exists():
            mlflow.log_artifact(str(artifact))
        return run.info.run_id
