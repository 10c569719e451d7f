"""Report emission: CSV (long form plus a table mirroring the benchmark
layout) and JSON. Floats are written with repr so identical runs produce
identical bytes."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .bootstrap import MetricReport
from .harness import METRIC_NAMES, AblationResult, Reports
from .shift import ShiftReport

_LONG_HEADER = [
    "row",
    "label",
    "metric",
    "point",
    "ci_low",
    "ci_high",
    "half_width",
    "resample_std",
    "n_resamples",
    "n_skipped",
    "level",
]


def _long_rows(row_name: str, reports: Reports) -> list[list[str]]:
    out = []
    for label, metrics in reports.items():
        for name in METRIC_NAMES:
            r = metrics[name]
            out.append(
                [
                    row_name,
                    label,
                    name,
                    repr(r.point),
                    repr(r.ci_low),
                    repr(r.ci_high),
                    repr(r.half_width),
                    repr(r.resample_std),
                    str(r.n_resamples),
                    str(r.n_skipped),
                    repr(r.level),
                ]
            )
    return out


def write_metrics_csv(reports: Reports, path: str | Path, row_name: str = "model") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_LONG_HEADER)
        writer.writerows(_long_rows(row_name, reports))


def _report_obj(r: MetricReport) -> dict:
    return {
        "point": r.point,
        "ci_low": r.ci_low,
        "ci_high": r.ci_high,
        "half_width": r.half_width,
        "resample_std": r.resample_std,
        "n_resamples": r.n_resamples,
        "n_skipped": r.n_skipped,
        "level": r.level,
        "pretty_ci": f"{r.point:.3f} ± {r.half_width:.3f}",
        "pretty_std": f"{r.point:.3f} ± {r.resample_std:.3f}",
    }


def write_metrics_json(reports: Reports, path: str | Path, row_name: str = "model") -> None:
    obj = {
        "row": row_name,
        "labels": {
            label: {name: _report_obj(metrics[name]) for name in METRIC_NAMES}
            for label, metrics in reports.items()
        },
    }
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_ablation_csv(results: list[AblationResult], path: str | Path) -> None:
    """Long-form rows, one per (subset, label, metric)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_LONG_HEADER)
        for result in results:
            writer.writerows(_long_rows(result.name(), result.reports))


def write_ablation_table_csv(results: list[AblationResult], path: str | Path) -> None:
    """Benchmark-style table: rows are subsets, cells are "point ± half-width"."""
    labels: list[str] = []
    for result in results:
        for label in result.reports:
            if label not in labels:
                labels.append(label)
    header = ["subset"] + [f"{label}:{m}" for label in labels for m in METRIC_NAMES]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for result in results:
            row = [result.name()]
            for label in labels:
                metrics = result.reports.get(label)
                for name in METRIC_NAMES:
                    if metrics is None:
                        row.append("")
                    else:
                        r = metrics[name]
                        row.append(f"{r.point:.3f} ± {r.half_width:.3f}")
            writer.writerow(row)


def write_shift_json(report: ShiftReport, path: str | Path) -> None:
    obj = {
        "categorical": [
            {
                "modality": c.modality.value,
                "field": c.field,
                "a_size": c.a_size,
                "b_size": c.b_size,
                "intersection": c.intersection,
            }
            for c in report.categorical
        ],
        "numeric": [
            {
                "modality": n.modality.value,
                "field": n.field,
                "a": None if n.a is None else vars(n.a),
                "b": None if n.b is None else vars(n.b),
            }
            for n in report.numeric
        ],
    }
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_shift_csv(report: ShiftReport, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["kind", "modality", "field", "a_size", "b_size", "intersection", "a_summary", "b_summary"]
        )
        for c in report.categorical:
            writer.writerow(
                ["categorical", c.modality.value, c.field, c.a_size, c.b_size, c.intersection, "", ""]
            )

        def fmt(f) -> str:
            if f is None:
                return ""
            return (
                f"min={f.minimum!r} q1={f.q1!r} median={f.median!r} "
                f"q3={f.q3!r} max={f.maximum!r} n={f.count}"
            )

        for n in report.numeric:
            writer.writerow(
                ["numeric", n.modality.value, n.field, "", "", "", fmt(n.a), fmt(n.b)]
            )
