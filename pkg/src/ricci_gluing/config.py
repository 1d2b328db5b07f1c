"""Run configuration and tunable constants."""

from __future__ import annotations

import argparse
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

from ricci_gluing.errors import InvalidInputError, NTooSmallError

if TYPE_CHECKING:
    from ricci_gluing.gluing import GluingSpec

DEFAULT_SEED = 1337
DEFAULT_N_RANGE = (5, 9)
MIN_BLOCK_SIZE = 2
MAX_BLOCK_SIZE = 20
POSITIVITY_MIN_N = 5

ORACLE_MAX_SUPPORT = 12
CHEEGER_MAX_VERTICES = 20
PAIR_CHECK_MAX_VERTICES = 14
COMPLETE_BASELINE_RANGE = (3, 10)

FLOAT_TOLERANCE = 1e-9
EIGEN_RESIDUAL_LIMIT = 1e-10
JACOBI_TOLERANCE = 1e-14
JACOBI_MAX_SWEEPS = 100
FLOAT_SIGNIFICANT_DIGITS = 12

SCHEMA_VERSION = 1
DEFAULT_EXPERIMENT_NAME = "ricci-gluing"
JOBS_ENV_VAR = "RICCI_GLUING_JOBS"

COMMANDS = ("curvature", "gluing-sweep", "verify", "spectral", "cheeger")
OUTPUT_FORMATS = ("csv", "json", "text")

_RANGE_PATTERN = re.compile(r"^\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?$")
_GLUING_PATTERN = re.compile(r"^\s*n\s*=\s*(\d+)\s*,\s*m\s*=\s*(\d+)\s*$")


def parse_int_range(text: str) -> tuple[int, int]:
    """Parse ``"5..9"`` or ``"6"`` into an inclusive (low, high) pair."""
    match = _RANGE_PATTERN.match(text)
    if match is None:
        raise InvalidInputError(f"Invalid range {text!r}; expected <a>..<b> or <a>")
    low = int(match.group(1))
    high = int(match.group(2)) if match.group(2) is not None else low
    if low > high:
        raise InvalidInputError(f"Invalid range {text!r}; lower end exceeds upper end")
    return low, high


def parse_gluing(text: str) -> GluingSpec:
    """Parse ``"n=6,m=5"`` into a validated GluingSpec."""
    from ricci_gluing.gluing import GluingSpec

    match = _GLUING_PATTERN.match(text)
    if match is None:
        raise InvalidInputError(f"Invalid gluing {text!r}; expected n=<int>,m=<int>")
    return GluingSpec(int(match.group(1)), int(match.group(2)))


def default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV_VAR)
    if not raw:
        return 1
    try:
        jobs = int(raw)
    except ValueError as exc:
        raise InvalidInputError(f"{JOBS_ENV_VAR} must be an integer, got {raw!r}") from exc
    return max(jobs, 1)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: Path | None = None
    gluing: GluingSpec | None = None
    n_range: tuple[int, int] = DEFAULT_N_RANGE
    m_range: tuple[int, int] | None = None
    output_format: str = "text"
    output_path: Path | None = None
    jobs: int = 1
    inject_off_by_one: bool = False
    strict_cheeger: bool = True
    metrics_path: Path | None = None
    track: bool = False
    experiment: str = DEFAULT_EXPERIMENT_NAME
    mlflow_uri: str | None = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise InvalidInputError(f"Unknown command {self.command!r}")
        if self.output_format not in OUTPUT_FORMATS:
            raise InvalidInputError(f"Unknown output format {self.output_format!r}")
        if self.jobs < 1:
            raise InvalidInputError(f"--jobs must be at least 1, got {self.jobs}")

        low, high = self.n_range
        if low < MIN_BLOCK_SIZE or high > MAX_BLOCK_SIZE:
            raise InvalidInputError(
                f"n range {low}..{high} must lie within {MIN_BLOCK_SIZE}..{MAX_BLOCK_SIZE}"
            )
        if self.command == "verify" and low < POSITIVITY_MIN_N:
            raise NTooSmallError(f"verify requires n >= {POSITIVITY_MIN_N}, got n={low}")

        if self.m_range is not None:
            m_low, m_high = self.m_range
            if m_low < 1 or m_low > high - 1:
                raise InvalidInputError(
                    f"m range {m_low}..{m_high} has no valid m for n in {low}..{high}"
                )

        if self.command in {"curvature", "spectral", "cheeger"}:
            if (self.input_path is None) == (self.gluing is None):
                raise InvalidInputError(f"{self.command} needs exactly one of --input or --gluing")

    @property
    def n_values(self) -> list[int]:
        low, high = self.n_range
        return list(range(low, high + 1))

    def m_values(self, n: int) -> list[int]:
        """Valid m for a block size n, clipped to the configured m range."""
        if self.m_range is None:
            return list(range(1, n))
        low, high = self.m_range
        return list(range(max(low, 1), min(high, n - 1) + 1))

    def to_params(self) -> dict[str, str]:
        return {
            "command": self.command,
            "input_path": str(self.input_path) if self.input_path else "none",
            "gluing": f"n={self.gluing.n},m={self.gluing.m}" if self.gluing else "none",
            "n_range": f"{self.n_range[0]}..{self.n_range[1]}",
            "m_range": f"{self.m_range[0]}..{self.m_range[1]}" if self.m_range else "all",
            "jobs": str(self.jobs),
            "inject_off_by_one": str(self.inject_off_by_one).lower(),
            "strict_cheeger": str(self.strict_cheeger).lower(),
        }

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        def _path(value: str | None) -> Path | None:
            if value is None or value == "-":
                return None
            return Path(value)

        return cls(
            command=args.command,
            input_path=_path(getattr(args, "input", None)),
            gluing=parse_gluing(args.gluing) if getattr(args, "gluing", None) else None,
            n_range=parse_int_range(args.n) if getattr(args, "n", None) else DEFAULT_N_RANGE,
            m_range=parse_int_range(args.m) if getattr(args, "m", None) else None,
            output_format=args.format,
            output_path=_path(args.output),
            jobs=args.jobs if args.jobs is not None else default_jobs(),
            inject_off_by_one=getattr(args, "inject_off_by_one", False),
            strict_cheeger=not getattr(args, "non_strict", False),
            metrics_path=_path(args.metrics_path),
            track=args.track,
            experiment=args.experiment,
            mlflow_uri=args.mlflow_uri,
        )
