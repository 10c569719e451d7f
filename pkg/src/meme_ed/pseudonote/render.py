"""Deterministic note rendering from visit rows.

Rendering is a pure function of (visit, templates): slot values are copied
verbatim (numbers and timestamps exactly as stored), absent fields render as
"unknown", an empty modality yields its filler sentence, and identifier
fields can never be bound to a slot.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from ..errors import DataError
from ..modalities import CANONICAL_ORDER, MSEM_KEY, Modality
from ..ingest.schema import SchemaSpec
from ..ingest.types import Row, VisitRecord
from .templates import ModalityTemplate, TemplateSpec

_SLOT_RE = re.compile(r"\{([A-Za-z0-9_]+)\}")

ABSENT_VALUE = "unknown"


class UnknownModality(DataError):
    def __init__(self, modality: object):
        super().__init__(f"templates do not cover modality {modality!r}")


class TemplateSlotUnbound(DataError):
    def __init__(self, field: str, reason: str):
        super().__init__(f"slot {{{field}}} cannot be bound: {reason}")
        self.field = field


@dataclass(frozen=True)
class PseudoNote:
    """Rendered text for one (visit, modality) pair.

    ``modality`` is one of the six Modality members, or the literal "msem"
    tag for the joined single-embedding note.
    """

    visit_id: str
    modality: Modality | str
    text: str

    @property
    def modality_name(self) -> str:
        return self.modality.value if isinstance(self.modality, Modality) else self.modality


def template_slots(template: ModalityTemplate) -> tuple[str, ...]:
    return tuple(_SLOT_RE.findall(template.prefix) + _SLOT_RE.findall(template.row_template))


def _fill(template_text: str, row: Row, barred: frozenset[str]) -> str:
    def sub(match: re.Match[str]) -> str:
        name = match.group(1)
        if name in barred:
            raise TemplateSlotUnbound(name, "field is a designated identifier")
        return row.get(name, ABSENT_VALUE)

    return _SLOT_RE.sub(sub, template_text)


def _barred_fields(visit: VisitRecord, schema: SchemaSpec | None, modality: Modality) -> frozenset[str]:
    if schema is not None:
        return schema.identifier_fields(modality)
    # Without a schema the visit key and the conventional patient id column
    # are still barred; note text must never contain them.
    return frozenset(("visit_id", "patient_id"))


def render_modality(
    visit: VisitRecord,
    modality: Modality,
    templates: TemplateSpec,
    schema: SchemaSpec | None = None,
) -> PseudoNote:
    """Render one modality's rows into a note (filler if the modality is empty)."""
    template = templates.modalities.get(modality)
    if template is None:
        raise UnknownModality(modality)
    rows = visit.rows(modality)
    if not rows:
        return PseudoNote(visit_id=visit.visit_id, modality=modality, text=template.filler)
    barred = _barred_fields(visit, schema, modality)
    clauses = [_fill(template.row_template, row, barred) for row in rows]
    text = (_fill(template.prefix, rows[0], barred) if template.prefix else "") + (
        template.row_separator.join(clauses)
    )
    return PseudoNote(visit_id=visit.visit_id, modality=modality, text=text)


def render_all(
    visit: VisitRecord, templates: TemplateSpec, schema: SchemaSpec | None = None
) -> list[PseudoNote]:
    """All six notes in canonical modality order."""
    return [render_modality(visit, m, templates, schema) for m in CANONICAL_ORDER]


def render_msem(
    visit: VisitRecord, templates: TemplateSpec, schema: SchemaSpec | None = None
) -> PseudoNote:
    """The six notes joined by single spaces into one heterogeneous note.

    Truncation to the token budget happens downstream at embedding time.
    """
    notes = render_all(visit, templates, schema)
    return PseudoNote(
        visit_id=visit.visit_id,
        modality=MSEM_KEY,
        text=" ".join(n.text for n in notes),
    )


def render_disposition_report(
    visit: VisitRecord, templates: TemplateSpec, schema: SchemaSpec | None = None
) -> str:
    """Human-readable outcome sentence. Never feed this to a model: it names
    the prediction target."""
    rows = visit.rows(Modality.ARRIVAL)
    if not rows:
        return "No disposition was recorded for this visit."
    barred = _barred_fields(visit, schema, Modality.ARRIVAL)
    return _fill(templates.disposition_report, rows[0], barred)


def write_notes(notes: Iterable[PseudoNote], path: str | Path) -> None:
    """JSON Lines, one {visit_id, modality, text} object per note."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for note in notes:
            fh.write(
                json.dumps(
                    {"visit_id": note.visit_id, "modality": note.modality_name, "text": note.text},
                    sort_keys=True,
                )
                + "\n"
            )


def read_notes(path: str | Path) -> list[PseudoNote]:
    out: list[PseudoNote] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                name = obj["modality"]
                modality = MSEM_KEY if name == MSEM_KEY else Modality(name)
                out.append(
                    PseudoNote(visit_id=obj["visit_id"], modality=modality, text=obj["text"])
                )
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise DataError(f"{path}:{lineno}: bad note record: {exc}") from exc
    return out
