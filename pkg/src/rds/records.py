"""Line-oriented serialization shared by every command.

JSONL is the primary format: one self-contained record per line, with an
envelope header line carrying the schema version, tool version, and the
configuration echo.  CSV is the spreadsheet-facing alternative with a
fixed header per record kind and no envelope.  Rationals always use the
canonical "num/den" text form; field order is stable so identical inputs
produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import IO, Iterable

from . import __version__
from .errors import RdsError
from .pythagorean import Triplet, classify_ratio, min_hypotenuse
from .rat import Rat, parse_rat
from .search import CountReport
from .solver import Solution

SCHEMA_VERSION = 1
PRODUCED_BY = f"rds {__version__}"

CSV_HEADERS = {
    "triplet": ["alpha", "beta", "gamma"],
    "ratio": ["psi", "gamma", "class"],
    "solution": ["n", "x", "psi", "distances", "general_position"],
    "count": ["gamma", "theta_gp", "theta_all"],
    "growth": ["gamma", "primitive_triplets", "pool_size", "asymptotic_reference"],
}


class IoError(RdsError):
    """Failed to read or write an output path."""


@dataclass(frozen=True)
class RecordEnvelope:
    """Header metadata written as the first line of a JSONL stream."""

    kind: str
    config: dict | None = None
    schema_version: int = SCHEMA_VERSION
    produced_by: str = PRODUCED_BY

    def as_dict(self) -> dict:
        record: dict = {
            "schema_version": self.schema_version,
            "produced_by": self.produced_by,
            "kind": self.kind,
        }
        if self.config is not None:
            record["config"] = self.config
        return record


def triplet_record(t: Triplet) -> dict:
    return {"alpha": t.alpha, "beta": t.beta, "gamma": t.gamma}


def ratio_record(q: Rat) -> dict:
    gamma = None if q == 0 else min_hypotenuse(q)
    return {"psi": str(q), "gamma": gamma, "class": classify_ratio(q).label}


def solution_record(s: Solution) -> dict:
    return {
        "n": s.n,
        "x": [str(v) for v in s.x],
        "psi": [str(v) for v in s.psi],
        "distances": [str(v) for v in s.distances],
        "general_position": s.general_position,
    }


def count_record(report: CountReport, breakdown: bool = False) -> dict:
    record: dict = {
        "gamma": report.gamma_bound,
        "theta_gp": report.theta_gp,
        "theta_all": report.theta_all,
        "n": report.n,
        "mode": report.mode,
        "pool_size": report.pool_size,
    }
    if breakdown and report.exclusions:
        record["exclusions"] = dict(report.exclusions)
        record["extra_zero_sum_sets"] = [
            [str(v) for v in xs] for xs in report.extra_zero_sum_sets
        ]
    return record


def parse_solution_record(record: dict) -> Solution:
    return Solution(
        n=record["n"],
        x=tuple(parse_rat(s) for s in record["x"]),
        psi=tuple(parse_rat(s) for s in record["psi"]),
        distances=tuple(parse_rat(s) for s in record["distances"]),
        general_position=record["general_position"],
    )


def _csv_cell(value) -> str:
    if isinstance(value, list):
        return ";".join(str(v) for v in value)
    if value is None:
        return ""
    return str(value)


def write_records(
    records: Iterable[dict],
    out: IO[str],
    fmt: str = "jsonl",
    kind: str = "solution",
    config: dict | None = None,
) -> int:
    """Write records line by line, flushing each; returns records written."""
    count = 0
    if fmt == "jsonl":
        out.write(json.dumps(RecordEnvelope(kind=kind, config=config).as_dict()) + "\n")
        out.flush()
        for record in records:
            out.write(json.dumps(record) + "\n")
            out.flush()
            count += 1
    elif fmt == "csv":
        header = CSV_HEADERS[kind]
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        out.flush()
        for record in records:
            writer.writerow([_csv_cell(record.get(col)) for col in header])
            out.flush()
            count += 1
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return count


def write_records_path(
    records: Iterable[dict],
    path: str,
    fmt: str = "jsonl",
    kind: str = "solution",
    config: dict | None = None,
) -> int:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            return write_records(records, fh, fmt=fmt, kind=kind, config=config)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_jsonl(path: str) -> tuple[dict | None, list[dict]]:
    """Read a JSONL file back into (envelope, payload records)."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [json.loads(line) for line in fh if line.strip()]
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if lines and "schema_version" in lines[0] and "kind" in lines[0]:
        return lines[0], lines[1:]
    return None, lines


def render_jsonl(records: Iterable[dict], kind: str, config: dict | None = None) -> str:
    buf = io.StringIO()
    write_records(records, buf, fmt="jsonl", kind=kind, config=config)
    return buf.getvalue()
