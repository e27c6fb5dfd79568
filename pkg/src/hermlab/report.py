"""Experiment reports: content hashing, JSON/CSV/plot-data export.

Reports embed the config echo so every number in every table is
reproducible from the file alone.  JSON stores floats as shortest
round-trip decimal strings (repr), so parsing the export reproduces the
binary values exactly; the content hash is the sha256 of the canonical
JSON payload without the hash field.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

__all__ = ["ExperimentReport", "export", "load_report", "TOOL_VERSION"]

TOOL_VERSION = "hermlab 0.1.0"


def _encode(value):
    """Floats to repr strings (tagged), containers walked recursively."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return {"float": repr(value)}
    if isinstance(value, complex):
        return {"float_re": repr(value.real), "float_im": repr(value.imag)}
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    try:
        import numpy as np

        if isinstance(value, np.integer):
            return int(value)
        if isinstance(value, np.floating):
            return {"float": repr(float(value))}
        if isinstance(value, np.ndarray):
            return [_encode(v) for v in value.tolist()]
    except ImportError:  # pragma: no cover
        pass
    raise TypeError(f"cannot encode {type(value)} in a report")


def _decode(value):
    if isinstance(value, dict):
        if set(value) == {"float"}:
            return float(value["float"])
        if set(value) == {"float_re", "float_im"}:
            return complex(float(value["float_re"]), float(value["float_im"]))
        return {k: _decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_decode(v) for v in value]
    return value


@dataclass
class ExperimentReport:
    experiment: str
    config: dict
    items: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)
    tool_version: str = TOOL_VERSION

    def payload(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "experiment": self.experiment,
            "config": _encode(self.config),
            "items": _encode(self.items),
            "summary": _encode(self.summary),
            "series": _encode(self.series),
        }

    def content_hash(self) -> str:
        canon = json.dumps(self.payload(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()

    def to_json(self) -> str:
        body = self.payload()
        body["content_hash"] = self.content_hash()
        return json.dumps(body, sort_keys=True, indent=1)


def _format_number(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv_rows(report: ExperimentReport) -> tuple[list[str], list[list[str]]]:
    if not report.items:
        return ["item", "p", "value"], []
    keys: list[str] = []
    for item in report.items:
        for k in item:
            if k not in keys:
                keys.append(k)
    front = [k for k in ("item", "p") if k in keys]
    rest = sorted(k for k in keys if k not in ("item", "p"))
    header = front + rest
    rows = [[_format_number(item.get(k, "")) for k in header] for item in report.items]
    return header, rows


def export(report: ExperimentReport, fmt: str, out_dir: str) -> list[str]:
    """Write report files; returns the paths written.

    json: full nested report.  csv: one row per item plus, for each
    declared series, a plot_<name>.csv of (x, y) pairs.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if fmt == "json":
        path = os.path.join(out_dir, "report.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
        written.append(path)
    elif fmt == "csv":
        path = os.path.join(out_dir, "report.csv")
        header, rows = _csv_rows(report)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(row) + "\n")
        written.append(path)
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    for name, pairs in report.series.items():
        spath = os.path.join(out_dir, f"plot_{name}.csv")
        with open(spath, "w", encoding="utf-8") as fh:
            fh.write("x,y\n")
            for x, y in pairs:
                fh.write(f"{_format_number(x)},{_format_number(y)}\n")
        written.append(spath)
    return written


def load_report(path: str) -> ExperimentReport:
    """Read a JSON report back; numeric fields reproduce bit-exactly."""
    with open(path, "r", encoding="utf-8") as fh:
        body = json.load(fh)
    stored_hash = body.pop("content_hash", None)
    report = ExperimentReport(
        experiment=body["experiment"],
        config=_decode(body["config"]),
        items=_decode(body["items"]),
        summary=_decode(body["summary"]),
        series=_decode(body["series"]),
        tool_version=body["tool_version"],
    )
    if stored_hash is not None and report.content_hash() != stored_hash:
        raise ValueError(f"content hash mismatch in {path}")
    return report
