"""Canonical dataset interchange: JSON Lines, one visit per line.

Keys are sorted and output is ASCII-escaped so identical datasets always
serialize to identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import DataError
from ..modalities import parse_modality
from .types import Dataset, LabelSet, Provenance, VisitRecord


def visit_to_obj(visit: VisitRecord) -> dict:
    obj: dict = {
        "visit_id": visit.visit_id,
        "modality_rows": {m.value: rows for m, rows in visit.modality_rows.items() if rows},
    }
    if visit.labels is not None:
        labels = {"disposition": visit.labels.disposition}
        if visit.labels.disposition == 1:
            labels.update(
                discharge_home=visit.labels.discharge_home,
                icu=visit.labels.icu,
                mortality=visit.labels.mortality,
            )
        obj["labels"] = labels
    return obj


def visit_from_obj(obj: dict) -> VisitRecord:
    try:
        rows = {
            parse_modality(name): [dict(r) for r in rs]
            for name, rs in obj.get("modality_rows", {}).items()
        }
        labels_obj = obj.get("labels")
        labels = None if labels_obj is None else LabelSet(**labels_obj)
        return VisitRecord(visit_id=obj["visit_id"], modality_rows=rows, labels=labels)
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed visit record: {exc}") from exc


def write_dataset(dataset: Dataset, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for visit in dataset.visits:
            fh.write(json.dumps(visit_to_obj(visit), sort_keys=True) + "\n")


def read_dataset(path: str | Path, source: str = "real") -> Dataset:
    visits = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                visits.append(visit_from_obj(json.loads(line)))
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
    return Dataset(visits=visits, provenance=Provenance(source=source, schema_version=1))
