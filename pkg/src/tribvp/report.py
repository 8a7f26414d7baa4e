"""Deterministic JSON/CSV rendering of run results."""

from __future__ import annotations

import json

SCHEMA_VERSION = "1"


def render_report(
    config_doc: dict,
    hypothesis: dict,
    constants: dict | None = None,
    certificate: dict | None = None,
    thresholds: dict | None = None,
    thresholds_source: str | None = None,
    solutions: list | None = None,
    timing: dict | None = None,
) -> dict:
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": config_doc,
        "hypothesis": hypothesis,
        "constants": constants,
        "certificate": certificate,
        "solutions": solutions,
    }
    if thresholds is not None:
        report["thresholds"] = thresholds
        report["thresholds_source"] = thresholds_source
    if timing is not None:
        report["timing"] = timing
    return report


def dump_report(report: dict, path) -> None:
    text = json.dumps(report, sort_keys=True, indent=2)
    with open(path, "w", newline="") as fh:
        fh.write(text + "\n")


def format_sig(value: float) -> str:
    """17 significant digits, enough to reproduce any double exactly."""
    return f"{float(value):.17g}"


def write_sweep_csv(path, axis_names: list[str], rows: list[dict]) -> None:
    header = axis_names + ["lambda", "gamma", "m", "delta", "verdict"]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = [format_sig(row[name]) for name in axis_names]
            for key in ("lambda", "gamma", "m", "delta"):
                value = row.get(key)
                cells.append("" if value is None else format_sig(value))
            cells.append(row["verdict"])
            fh.write(",".join(cells) + "\n")
