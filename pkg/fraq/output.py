"""CSV and text output for the benchmark commands.

Floats are written with 17 significant digits so every file re-parses to
the values held in memory; missing values (undefined rates) are blank.
"""

import csv
from datetime import datetime
from fractions import Fraction
from pathlib import Path
from typing import IO, Any, Iterable, List, Optional, Sequence

import numpy as np

from . import __version__
from .experiments import ConvergenceReport, TimingRow
from .kernels import KernelErrorReport
from .solver import StateField
from .weights import WeightTable

WEIGHTS_HEADER = ("i", "d_i")
KERNEL_ERROR_HEADER = ("i", "eps_abs")
SNAPSHOT_HEADER = ("x", "g1", "g2")
CONVERGENCE_HEADER = ("tau", "E1", "rate1", "E2", "rate2", "seconds")
TIMING_HEADER = ("scheme", "N", "seconds_loop", "seconds_setup")

# Echoed next to every convergence table and into meta.txt
RATE_NOTE = "blank rate = first tau, or a zero error at either step (rate undefined)"


def format_value(value: Any) -> str:
    """Render one CSV cell."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating, Fraction)):
        return format(float(value), ".17g")
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def write_csv(stream: IO[str], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Write a header and formatted rows."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])


def write_weights(stream: IO[str], table: WeightTable) -> None:
    write_csv(stream, WEIGHTS_HEADER, enumerate(table.weights))


def write_kernel_error(stream: IO[str], report: KernelErrorReport) -> None:
    write_csv(stream, KERNEL_ERROR_HEADER, zip(report.indices, report.errors))


def write_snapshot(stream: IO[str], x: np.ndarray, state: StateField) -> None:
    write_csv(stream, SNAPSHOT_HEADER, zip(x, state.g1, state.g2))


def write_convergence(stream: IO[str], report: ConvergenceReport) -> None:
    write_csv(
        stream,
        CONVERGENCE_HEADER,
        ((r.tau, r.e1, r.rate1, r.e2, r.rate2, r.seconds) for r in report.rows),
    )


def write_timing(stream: IO[str], rows: Sequence[TimingRow]) -> None:
    write_csv(
        stream,
        TIMING_HEADER,
        ((r.scheme, r.n, r.seconds_loop, r.seconds_setup) for r in rows),
    )


def convergence_filename(report: ConvergenceReport) -> str:
    """File name of one convergence table."""
    return f"convergence_{report.scheme.value}_{report.alpha1:g}_{report.alpha2:g}.csv"


def write_meta(
    directory: Path, config_lines: List[str], extra: Optional[dict] = None
) -> Path:
    """
    Write meta.txt echoing the resolved configuration.

    Args:
        directory: Output directory
        config_lines: 'key = value' lines from Config.describe()
        extra: Additional key/value pairs (command, timings)

    Returns:
        Path of the written file
    """
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / "meta.txt"
    lines = [
        f"# fraq {__version__}",
        f"# written {datetime.now().isoformat(timespec='seconds')}",
    ]
    lines.extend(config_lines)
    for key, value in (extra or {}).items():
        lines.append(f"{key} = {format_value(value)}")
    path.write_text("\n".join(lines) + "\n")
    return path


def _rate(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.4f}"


def format_convergence_table(report: ConvergenceReport) -> str:
    """Human-readable convergence table."""
    lines = [
        f"{report.scheme.value}  alpha1={report.alpha1:g}  alpha2={report.alpha2:g}",
        f"{'tau':>10}  {'E1':>11}  {'Rate1':>7}  {'E2':>11}  {'Rate2':>7}  {'CPU(s)':>8}",
    ]
    for row in report.rows:
        lines.append(
            f"{str(row.tau):>10}  {row.e1:11.3e}  {_rate(row.rate1):>7}  "
            f"{row.e2:11.3e}  {_rate(row.rate2):>7}  {row.seconds:8.2f}"
        )
    lines.append(f"({RATE_NOTE})")
    return "\n".join(lines)
