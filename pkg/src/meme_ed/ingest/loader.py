"""CSV ingestion: group modality tables into VisitRecords.

Inputs are UTF-8 CSV files with a header row (RFC-4180 quoting). Values are
kept verbatim; empty cells become absent fields. Rows whose required values
cannot be used (blank visit key, unparseable timestamp) are rejected with a
row-level diagnostic instead of failing the whole load.
"""

from __future__ import annotations

import csv
import logging
from datetime import datetime
from pathlib import Path

from ..errors import DataError
from ..modalities import CANONICAL_ORDER, Modality
from .schema import SchemaSpec
from .types import Dataset, Provenance, Row, VisitRecord

log = logging.getLogger(__name__)


class UnreadableFile(DataError):
    def __init__(self, path: str | Path, reason: str):
        super().__init__(f"cannot read {path}: {reason}")
        self.path = str(path)


class MissingColumn(DataError):
    def __init__(self, modality: Modality, name: str):
        super().__init__(f"{modality.value} table is missing required column {name!r}")
        self.modality = modality
        self.name = name


class DuplicateVisitConflict(DataError):
    def __init__(self, visit_id: str):
        super().__init__(f"visit {visit_id!r} has contradictory arrival rows")
        self.visit_id = visit_id


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601-like timestamp ('2180-05-06 19:17:00').

    Used only for ordering; the raw string is what gets rendered.
    """
    return datetime.fromisoformat(value.strip())


def _read_rows(path: str | Path, modality: Modality, schema: SchemaSpec) -> list[tuple[int, Row]]:
    try:
        handle = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise UnreadableFile(path, str(exc)) from exc
    with handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise UnreadableFile(path, "empty file (no header row)")
        header = set(reader.fieldnames)
        required = schema.modalities.get(modality)
        if required is not None:
            for col in required.required:
                if col not in header:
                    raise MissingColumn(modality, col)
        if schema.visit_key not in header:
            raise MissingColumn(modality, schema.visit_key)
        out: list[tuple[int, Row]] = []
        for lineno, raw in enumerate(reader, start=2):
            row = {k: v for k, v in raw.items() if k is not None and v is not None and v != ""}
            out.append((lineno, row))
        return out


def load_tables(paths: dict[Modality, str | Path], schema: SchemaSpec) -> Dataset:
    """Load one CSV per modality and assemble visits keyed by the visit id.

    The arrival table defines the visit universe and its row order defines
    dataset order. Rows in other tables referencing unknown visit ids are
    rejected with diagnostics.
    """
    if Modality.ARRIVAL not in paths:
        raise DataError("an arrival table is required")

    diagnostics: list[str] = []
    visits: dict[str, VisitRecord] = {}
    order: list[str] = []

    arrival_rows = _read_rows(paths[Modality.ARRIVAL], Modality.ARRIVAL, schema)
    for lineno, row in arrival_rows:
        vid = row.get(schema.visit_key, "").strip()
        if not vid:
            diagnostics.append(f"arrival:{lineno}: blank visit key, row rejected")
            continue
        if vid in visits:
            existing = visits[vid].rows(Modality.ARRIVAL)[0]
            if existing == row:
                diagnostics.append(f"arrival:{lineno}: exact duplicate row for {vid}, deduped")
                continue
            raise DuplicateVisitConflict(vid)
        visits[vid] = VisitRecord(visit_id=vid, modality_rows={Modality.ARRIVAL: [row]})
        order.append(vid)

    for modality in CANONICAL_ORDER:
        if modality is Modality.ARRIVAL or modality not in paths:
            continue
        ms = schema.modalities.get(modality)
        ts_field = ms.timestamp_field if ms else None
        keyed: dict[str, list[tuple[datetime | None, int, Row]]] = {}
        for lineno, row in _read_rows(paths[modality], modality, schema):
            vid = row.get(schema.visit_key, "").strip()
            if not vid:
                diagnostics.append(f"{modality.value}:{lineno}: blank visit key, row rejected")
                continue
            if vid not in visits:
                diagnostics.append(
                    f"{modality.value}:{lineno}: unknown visit {vid!r}, row rejected"
                )
                continue
            stamp: datetime | None = None
            if ts_field is not None:
                raw = row.get(ts_field, "")
                try:
                    stamp = parse_timestamp(raw)
                except ValueError:
                    diagnostics.append(
                        f"{modality.value}:{lineno}: unparseable {ts_field} {raw!r}, row rejected"
                    )
                    continue
            keyed.setdefault(vid, []).append((stamp, lineno, row))
        for vid, entries in keyed.items():
            if ts_field is not None:
                entries.sort(key=lambda e: (e[0], e[1]))  # time-ascending, file order ties
            visits[vid].modality_rows[modality] = [row for _, _, row in entries]

    for msg in diagnostics:
        log.warning("%s", msg)
    return Dataset(
        visits=[visits[vid] for vid in order],
        provenance=Provenance(source="real", schema_version=schema.version),
        diagnostics=diagnostics,
    )
