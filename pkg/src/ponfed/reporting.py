"""Stable on-disk formats for experiment results.

Everything written here is byte-deterministic: fixed column and key order,
floats rendered with nine significant digits, no timestamps, and files land
atomically (written to a temporary sibling, then renamed). The records CSV
is the contract consumed by the plotting frontend.
"""
from __future__ import annotations

import csv
import json
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, IoError, SchemaError
from .orchestrator import ModeComparison, RoundRecord

RECORDS_HEADER = (
    "round",
    "mode",
    "n_selected",
    "n_involved",
    "upstream_bits",
    "saving_fraction",
    "accuracy",
    "t_total_min_s",
    "t_total_mean_s",
    "t_total_max_s",
)

SWEEP_HEADER = (
    "n_selected",
    "mode",
    "mean_upstream_bits",
    "mean_involved",
    "final_accuracy",
)


def format_sig9(value: float) -> str:
    """Render a float with nine significant digits (the on-disk precision)."""
    return "%.9g" % value


def _write_text_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def write_csv(records: list[RoundRecord], path: str) -> None:
    """Write round records as CSV, one row per round, header always present."""
    lines = [",".join(RECORDS_HEADER)]
    for r in records:
        lines.append(
            ",".join(
                [
                    str(r.round),
                    r.mode,
                    str(r.n_selected),
                    str(r.n_involved),
                    format_sig9(r.upstream_bits),
                    format_sig9(r.saving_fraction),
                    format_sig9(r.accuracy),
                    format_sig9(r.t_total_min_s),
                    format_sig9(r.t_total_mean_s),
                    format_sig9(r.t_total_max_s),
                ]
            )
        )
    _write_text_atomic(path, "\n".join(lines) + "\n")


def read_csv(path: str) -> list[RoundRecord]:
    """Parse a records CSV back into RoundRecord values."""
    try:
        with open(path, encoding="utf-8", newline="") as handle:
            rows = list(csv.reader(handle))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if not rows or tuple(rows[0]) != RECORDS_HEADER:
        raise SchemaError(f"{path}: expected header {','.join(RECORDS_HEADER)}")
    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(RECORDS_HEADER):
            raise SchemaError(f"{path}:{lineno}: expected {len(RECORDS_HEADER)} columns")
        try:
            records.append(
                RoundRecord(
                    round=int(row[0]),
                    mode=row[1],
                    n_selected=int(row[2]),
                    n_involved=int(row[3]),
                    upstream_bits=float(row[4]),
                    saving_fraction=float(row[5]),
                    accuracy=float(row[6]),
                    t_total_min_s=float(row[7]),
                    t_total_mean_s=float(row[8]),
                    t_total_max_s=float(row[9]),
                )
            )
        except ValueError as exc:
            raise SchemaError(f"{path}:{lineno}: {exc}") from exc
    return records


def summarize(records: list[RoundRecord]) -> dict:
    """Headline statistics, all recomputable from the records."""
    if not records:
        raise EmptyInput("cannot summarize an empty record list")
    involved = [r.n_involved for r in records]
    return {
        "mean_involved": float(np.mean(involved)),
        "min_involved": int(min(involved)),
        "max_involved": int(max(involved)),
        "mean_upstream_bits": float(np.mean([r.upstream_bits for r in records])),
        "final_accuracy": records[-1].accuracy,
        "best_accuracy": max(r.accuracy for r in records),
        "total_sim_time_s": float(sum(r.t_total_max_s for r in records)),
    }


@dataclass(frozen=True)
class ExperimentReport:
    """A finished run: config echo, its records, and where the CSV lives."""

    config: dict
    records: list[RoundRecord]
    records_path: str


def write_json_summary(report: ExperimentReport, path: str) -> None:
    """Write the run summary; the config echo makes replays self-contained."""
    obj = {
        "config": report.config,
        "records_path": report.records_path,
        "summary": summarize(report.records),
    }
    _write_text_atomic(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_comparison_json(
    config: dict,
    comparison: ModeComparison,
    classical_path: str,
    sfl_path: str,
    path: str,
) -> None:
    """Write the paired-run comparison with per-round saving fractions."""
    obj = {
        "config": config,
        "classical_records_path": classical_path,
        "sfl_records_path": sfl_path,
        "saving_fractions": comparison.saving_fractions,
        "summary": comparison.summary(),
    }
    _write_text_atomic(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_sweep_csv(rows: list[dict], path: str) -> None:
    """Write per-(N, mode) aggregates from a sweep, one row per run."""
    lines = [",".join(SWEEP_HEADER)]
    for row in rows:
        lines.append(
            ",".join(
                [
                    str(row["n_selected"]),
                    row["mode"],
                    format_sig9(row["mean_upstream_bits"]),
                    format_sig9(row["mean_involved"]),
                    format_sig9(row["final_accuracy"]),
                ]
            )
        )
    _write_text_atomic(path, "\n".join(lines) + "\n")
