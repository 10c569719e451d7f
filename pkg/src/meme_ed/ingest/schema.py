"""Table schemas: which columns each modality table must provide.

A schema travels as JSON so institutions can adapt column names without
touching code. Fields listed under ``identifiers`` are barred from note
templates and never rendered.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import DataError
from ..modalities import Modality, parse_modality


@dataclass(frozen=True)
class ModalitySchema:
    required: tuple[str, ...]
    timestamp_field: str | None = None
    identifiers: tuple[str, ...] = ()


@dataclass(frozen=True)
class SchemaSpec:
    visit_key: str
    modalities: dict[Modality, ModalitySchema] = field(default_factory=dict)
    version: int = 1

    def identifier_fields(self, modality: Modality) -> frozenset[str]:
        ms = self.modalities.get(modality)
        extra = ms.identifiers if ms else ()
        return frozenset((self.visit_key, *extra))

    def known_fields(self, modality: Modality) -> frozenset[str]:
        ms = self.modalities.get(modality)
        return frozenset(ms.required) if ms else frozenset()


def default_schema() -> SchemaSpec:
    """Schema for the bundled synthetic generator and MIMIC-style extracts.

    Outcome columns (disposition, discharge_location, icu, mortality) live on
    the arrival table; they feed label derivation only and are never slotted
    into note templates.
    """
    return SchemaSpec(
        visit_key="visit_id",
        modalities={
            Modality.ARRIVAL: ModalitySchema(
                required=(
                    "visit_id",
                    "age",
                    "gender",
                    "race",
                    "arrival_transport",
                    "intime",
                    "marital_status",
                    "insurance",
                    "language",
                    "disposition",
                ),
                identifiers=("patient_id",),
            ),
            Modality.TRIAGE: ModalitySchema(
                required=(
                    "visit_id",
                    "temperature",
                    "pulse",
                    "respirations",
                    "o2sat",
                    "sbp",
                    "dbp",
                    "pain",
                    "chiefcomplaint",
                    "acuity",
                ),
            ),
            Modality.MEDRECON: ModalitySchema(required=("visit_id", "name", "category")),
            Modality.PYXIS: ModalitySchema(
                required=("visit_id", "charttime", "name"),
                timestamp_field="charttime",
            ),
            Modality.VITALS: ModalitySchema(
                required=(
                    "visit_id",
                    "charttime",
                    "temperature",
                    "pulse",
                    "respirations",
                    "o2sat",
                    "sbp",
                    "dbp",
                    "pain",
                ),
                timestamp_field="charttime",
            ),
            Modality.CODES: ModalitySchema(
                required=("visit_id", "icd_version", "icd_code", "icd_title"),
            ),
        },
    )


def schema_to_json(schema: SchemaSpec) -> dict:
    return {
        "version": schema.version,
        "visit_key": schema.visit_key,
        "modalities": {
            m.value: {
                "required": list(ms.required),
                "timestamp_field": ms.timestamp_field,
                "identifiers": list(ms.identifiers),
            }
            for m, ms in schema.modalities.items()
        },
    }


def schema_from_json(obj: dict) -> SchemaSpec:
    try:
        modalities = {
            parse_modality(name): ModalitySchema(
                required=tuple(ms["required"]),
                timestamp_field=ms.get("timestamp_field"),
                identifiers=tuple(ms.get("identifiers", ())),
            )
            for name, ms in obj["modalities"].items()
        }
        return SchemaSpec(
            visit_key=obj["visit_key"],
            modalities=modalities,
            version=int(obj.get("version", 1)),
        )
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed schema spec: {exc}") from exc


def load_schema(path: str | Path) -> SchemaSpec:
    return schema_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def save_schema(schema: SchemaSpec, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(schema_to_json(schema), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
