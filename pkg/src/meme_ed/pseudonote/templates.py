"""Note templates: fixed literal skeletons with {field} slots.

The canonical templates reproduce the classic DotPhrase-style wording for
all six modalities, except that the leading patient identifier is replaced
by the neutral subject "The patient" (identifiers are never rendered).

A template is: optional prefix sentence fragment, a per-row clause repeated
in stored order, and a filler sentence used when the modality has no rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import DataError
from ..modalities import CANONICAL_ORDER, Modality, parse_modality


@dataclass(frozen=True)
class ModalityTemplate:
    row_template: str
    filler: str
    prefix: str = ""
    row_separator: str = " "


@dataclass(frozen=True)
class TemplateSpec:
    modalities: dict[Modality, ModalityTemplate] = field(default_factory=dict)
    #: Human-readable outcome note; never a model input (it states the label).
    disposition_report: str = "The ED disposition was {disposition}."
    version: int = 1


def _default_filler(modality: Modality) -> str:
    if modality is Modality.MEDRECON:
        return "The patient did not receive any medications."
    return f"No {modality.value} information was recorded for this visit."


def default_templates() -> TemplateSpec:
    return TemplateSpec(
        modalities={
            Modality.ARRIVAL: ModalityTemplate(
                row_template=(
                    "The patient, a {age} year old {race} {gender}, arrived via "
                    "{arrival_transport} at {intime}. The patient's marital status is "
                    "{marital_status}. The patient's insurance is {insurance}. "
                    "The patient's language is {language}."
                ),
                filler=_default_filler(Modality.ARRIVAL),
            ),
            Modality.TRIAGE: ModalityTemplate(
                row_template=(
                    "At triage: temperature was {temperature}, pulse was {pulse}, "
                    "respirations was {respirations}, o2 saturation was {o2sat}, "
                    "systolic blood pressure was {sbp}, diastolic blood pressure was "
                    "{dbp}, pain was {pain}, chief complaint was {chiefcomplaint}. "
                    "Acuity score was {acuity}."
                ),
                filler=_default_filler(Modality.TRIAGE),
            ),
            Modality.MEDRECON: ModalityTemplate(
                prefix="The patient was previously taking the following medications: ",
                row_template="{name}, {category}.",
                filler=_default_filler(Modality.MEDRECON),
            ),
            Modality.PYXIS: ModalityTemplate(
                prefix="The patient received the following medications: ",
                row_template="At {charttime}, {name} were administered.",
                filler=_default_filler(Modality.PYXIS),
            ),
            Modality.VITALS: ModalityTemplate(
                prefix="The patient had the following vitals: ",
                row_template=(
                    "At {charttime}, temperature was {temperature}, pulse was {pulse}, "
                    "respirations was {respirations}, o2 saturation was {o2sat}, "
                    "systolic blood pressure was {sbp}, diastolic blood pressure was "
                    "{dbp}, pain was {pain}."
                ),
                filler=_default_filler(Modality.VITALS),
            ),
            Modality.CODES: ModalityTemplate(
                prefix="The patient received the following diagnostic codes: ",
                row_template="ICD-{icd_version} code: [{icd_code}], {icd_title}.",
                filler=_default_filler(Modality.CODES),
            ),
        },
        disposition_report="The ED disposition was {disposition} at {outtime}.",
    )


def templates_to_json(spec: TemplateSpec) -> dict:
    return {
        "version": spec.version,
        "disposition_report": spec.disposition_report,
        "modalities": {
            m.value: {
                "prefix": t.prefix,
                "row_template": t.row_template,
                "row_separator": t.row_separator,
                "filler": t.filler,
            }
            for m, t in spec.modalities.items()
        },
    }


def templates_from_json(obj: dict) -> TemplateSpec:
    try:
        modalities = {
            parse_modality(name): ModalityTemplate(
                row_template=t["row_template"],
                filler=t["filler"],
                prefix=t.get("prefix", ""),
                row_separator=t.get("row_separator", " "),
            )
            for name, t in obj["modalities"].items()
        }
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed template spec: {exc}") from exc
    for t in modalities.values():
        if not t.filler.strip():
            raise DataError("filler sentences must be non-empty")
    return TemplateSpec(
        modalities=modalities,
        disposition_report=obj.get("disposition_report", "The ED disposition was {disposition}."),
        version=int(obj.get("version", 1)),
    )


def load_templates(path: str | Path) -> TemplateSpec:
    return templates_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def save_templates(spec: TemplateSpec, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(templates_to_json(spec), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def covered_modalities(spec: TemplateSpec) -> tuple[Modality, ...]:
    return tuple(m for m in CANONICAL_ORDER if m in spec.modalities)
