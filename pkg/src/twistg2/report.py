"""Machine-readable result output (CSV and JSON sharing one row layout).

The JSON layout is pinned by ``schemas/report.schema.json`` in the repo
root; tests validate against it.
"""

from __future__ import annotations

import csv
import json

COLUMNS = [
    "param_name",
    "param_value",
    "duration_ps",
    "n_i",
    "n_s1",
    "n_s2",
    "n_is1",
    "n_is2",
    "n_is1s2",
    "g2_direct",
    "g2_direct_err",
    "g2_direct_insufficient",
    "g2_accidental",
    "g2_accidental_err",
    "error",
]


def build_report(kind: str, rows: list, *, seed, window_ps: int, aborted=False) -> dict:
    return {
        "kind": kind,
        "seed": int(seed) if seed is not None else None,
        "window_ps": int(window_ps),
        "aborted": bool(aborted),
        "rows": rows,
    }


def write_report(report: dict, path, fmt: str) -> None:
    if fmt == "json":
        with open(path, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    elif fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, COLUMNS, restval="", extrasaction="ignore")
            writer.writeheader()
            for row in report["rows"]:
                out = dict(row)
                for key in ("g2_direct", "g2_direct_err",
                            "g2_accidental", "g2_accidental_err"):
                    if key in out:
                        out[key] = repr(float(out[key]))
                writer.writerow(out)
    else:
        raise ValueError(f"unknown output format {fmt!r}")


def read_report_csv(path) -> list:
    """Parse a report CSV back into typed rows (inverse of the csv writer)."""
    rows = []
    with open(path, newline="") as fh:
        for raw in csv.DictReader(fh):
            row = {}
            for key, val in raw.items():
                if val == "" or key is None:
                    continue
                if key in ("param_name", "error"):
                    row[key] = val
                elif key == "g2_direct_insufficient":
                    row[key] = val == "True"
                elif key.startswith("g2_") or key == "param_value":
                    row[key] = float(val)
                else:
                    row[key] = int(val)
            rows.append(row)
    return rows
