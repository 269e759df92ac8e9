"""
Report writing for the verify commands.

CSV: a few "# key: value" header lines (config hash, seed, version,
tolerances ...), then one header row and one row per record.  Numbers
are written with 12 significant digits, booleans as true/false.

JSON: {kind, header, generated_at, records}, validated against
schemas/<kind>.schema.json before it is written.  generated_at is the
only field that changes between identical runs and is not part of the
config hash.
"""

import csv
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import List, Tuple

import jsonschema

from perimflow import __version__
from perimflow.surface.io import load_schema


@dataclass(frozen=True)
class Report:
    "A finished sweep or check, ready to write."

    kind: str
    header: dict
    columns: Tuple[str, ...]
    records: List[dict]


def build_header(scenario, passed):
    "Header dict for a scenario's report."
    return {
        "config_hash": scenario.config_hash(),
        "seed": scenario.seed,
        "version": __version__,
        "shape": scenario.shape,
        "resolution": scenario.resolution,
        "solid": scenario.solid,
        "kernel_rel_tol": scenario.kernel_rel_tol,
        "tolerances": dict(sorted(scenario.tolerances.items())),
        "passed": bool(passed),
    }


def format_value(value):
    "CSV text of one cell."
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)


def write_csv(report, stream):
    "Write report as CSV to an open text stream."
    for key, value in report.header.items():
        stream.write(f"# {key}: {format_value(value)}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(report.columns)
    for record in report.records:
        writer.writerow([format_value(record[c]) for c in report.columns])


def to_json(report, generated_at=None):
    """
    JSON-ready dict of report, validated against its schema.
    generated_at defaults to now, in UTC.
    """
    if generated_at is None:
        generated_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    data = {
        "kind": report.kind,
        "header": report.header,
        "generated_at": generated_at,
        "records": report.records,
    }
    jsonschema.validate(data, load_schema(report.kind))
    return data


def write_json(report, stream):
    "Write report as JSON to an open text stream."
    json.dump(to_json(report), stream, indent=2)
    stream.write("\n")


def write_report(report, out=None, fmt="csv"):
    """
    Write report to the file out, or stdout when out is None.
    OSError if the file cannot be written.
    """
    writer = write_json if fmt == "json" else write_csv
    if out is None:
        writer(report, sys.stdout)
        return
    with open(out, "w", newline="", encoding="utf-8") as f:
        writer(report, f)
