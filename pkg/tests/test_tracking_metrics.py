"""Prometheus textfile output and MLflow run logging."""

from contextlib import contextmanager
from pathlib import Path
import sys
import types

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))

from ricci_gluing.cli import main  # noqa: E402
from ricci_gluing.config import RunConfig  # noqa: E402
from ricci_gluing.metrics import REGISTRY, record_check, write_metrics  # noqa: E402
from ricci_gluing.tracking import log_run, run_name  # noqa: E402


class FakeMlflow(types.ModuleType):
    def __init__(self) -> None:
        super().__init__("mlflow")
        self.calls: list[tuple[str, object]] = []
        self.__version__ = "fake"

    def set_tracking_uri(self, uri: str) -> None:
        self.calls.append(("set_tracking_uri", uri))

    def set_experiment(self, name: str) -> None:
        self.calls.append(("set_experiment", name))

    @contextmanager
    def start_run(self, run_name: str):
        self.calls.append(("start_run", run_name))
        yield types.SimpleNamespace(info=types.SimpleNamespace(run_id="run-123"))

    def log_params(self, params) -> None:
        self.calls.append(("log_params", dict(params)))

    def log_metrics(self, metrics) -> None:
        self.calls.append(("log_metrics", dict(metrics)))

    def log_artifact(self, path: str) -> None:
        self.calls.append(("log_artifact", path))


def _sample(name: str, labels: dict[str, str] | None = None) -> float:
    value = REGISTRY.get_sample_value(name, labels or {})
    return 0.0 if value is None else value


def test_record_check_counts_outcomes() -> None:
    before = _sample("ricci_verification_checks_total", {"suite": "duality", "outcome": "fail"})
    record_check("duality", False)
    after = _sample("ricci_verification_checks_total", {"suite": "duality", "outcome": "fail"})
    assert after == before + 1


def test_curvature_command_updates_counters_and_writes_textfile(tmp_path: Path) -> None:
    before = _sample("ricci_curvature_evaluations_total")
    metrics_path = tmp_path / "metrics" / "run.prom"

    assert main(["curvature", "--gluing", "n=5,m=3", "--metrics-path", str(metrics_path)]) == 0

    assert _sample("ricci_curvature_evaluations_total") == before + 27
    text = metrics_path.read_text(encoding="utf-8")
    assert "ricci_transport_solves_total" in text
    assert "ricci_transport_solve_seconds_bucket" in text


def test_write_metrics_creates_parent_directory(tmp_path: Path) -> None:
    path = tmp_path / "nested" / "out.prom"
    write_metrics(path)
    assert path.exists()


def test_log_run_uses_mlflow(monkeypatch, tmp_path: Path) -> None:
    fake = FakeMlflow()
    monkeypatch.setitem(sys.modules, "mlflow", fake)
    report = tmp_path / "sweep.csv"
    report.write_text("n,m\n", encoding="utf-8")
    config = RunConfig(
        command="gluing-sweep",
        n_range=(5, 6),
        output_path=report,
        track=True,
        mlflow_uri="file:./mlruns",
    )

    run_id = log_run(config, {"graphs": 9}, artifact=report)

    assert run_id == "run-123"
    names = [name for name, _ in fake.calls]
    assert names == [
        "set_tracking_uri",
        "set_experiment",
        "start_run",
        "log_params",
        "log_metrics",
        "log_artifact",
    ]
    assert dict(fake.calls)["log_params"]["n_range"] == "5..6"
    assert dict(fake.calls)["log_metrics"] == {"graphs": 9.0}
    assert dict(fake.calls)["start_run"].startswith("gluing-sweep-")


def test_track_flag_logs_the_report(monkeypatch, tmp_path: Path) -> None:
    fake = FakeMlflow()
    monkeypatch.setitem(sys.modules, "mlflow", fake)
    output = tmp_path / "sweep.json"

    code = main(["gluing-sweep", "--n", "5", "--format", "json", "--output", str(output), "--track"])

    assert code == 0
    assert ("set_experiment", "ricci-gluing") in fake.calls
    assert ("log_artifact", str(output)) in fake.calls


def test_run_name_has_timestamp_suffix() -> None:
    name = run_name("verify")
    assert name.startswith("verify-")
    assert len(name) == len("verify-") + len("20240101-000000")
