"""Label derivation, cohort filtering, and prevalence.

The disposition rule table ships with MIMIC-IV-ED vocabulary and is
user-extensible; unmapped values are hard errors so new vocabularies
surface instead of being silently dropped.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import DataError
from ..modalities import Modality
from .types import Dataset, LabelKind, LabelSet, TaskKind, VisitRecord

ADMIT = "admit"
HOME = "home"
EXCLUDE = "exclude"

#: Disposition vocabulary observed in MIMIC-IV-ED edstays. Values outside the
#: admitted/home dichotomy are excluded from the cohort, mirroring the
#: benchmark's binary framing.
DEFAULT_DISPOSITION_MAP: dict[str, str] = {
    "ADMITTED": ADMIT,
    "HOME": HOME,
    "ELOPED": EXCLUDE,
    "EXPIRED": EXCLUDE,
    "LEFT AGAINST MEDICAL ADVICE": EXCLUDE,
    "LEFT WITHOUT BEING SEEN": EXCLUDE,
    "TRANSFER": EXCLUDE,
    "OTHER": EXCLUDE,
}

_TRUE_VALUES = ("1", "TRUE", "YES", "Y", "T")


class UnmappedDispositionValue(DataError):
    def __init__(self, value: str):
        super().__init__(
            f"disposition value {value!r} is not in the rule table; extend the label rules"
        )
        self.value = value


class MissingLabelField(DataError):
    def __init__(self, visit_id: str, field_name: str):
        super().__init__(f"visit {visit_id!r} lacks label source field {field_name!r}")
        self.visit_id = visit_id
        self.field = field_name


class NoLabeledVisits(DataError):
    pass


class EmptyCohortWarning(UserWarning):
    pass


@dataclass(frozen=True)
class LabelRuleSpec:
    """Field names and value tables that turn raw rows into labels."""

    disposition_field: str = "disposition"
    disposition_map: dict[str, str] = field(
        default_factory=lambda: dict(DEFAULT_DISPOSITION_MAP)
    )
    discharge_field: str = "discharge_location"
    discharge_home_values: tuple[str, ...] = ("HOME", "HOME HEALTH CARE")
    icu_field: str = "icu"
    icu_true_values: tuple[str, ...] = _TRUE_VALUES
    mortality_field: str = "mortality"
    mortality_true_values: tuple[str, ...] = _TRUE_VALUES


def load_label_rules(path: str | Path) -> LabelRuleSpec:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    base = LabelRuleSpec()
    dispo = dict(DEFAULT_DISPOSITION_MAP)
    dispo.update({k.upper(): v for k, v in obj.get("disposition_map", {}).items()})
    return LabelRuleSpec(
        disposition_field=obj.get("disposition_field", base.disposition_field),
        disposition_map=dispo,
        discharge_field=obj.get("discharge_field", base.discharge_field),
        discharge_home_values=tuple(
            v.upper() for v in obj.get("discharge_home_values", base.discharge_home_values)
        ),
        icu_field=obj.get("icu_field", base.icu_field),
        icu_true_values=tuple(v.upper() for v in obj.get("icu_true_values", _TRUE_VALUES)),
        mortality_field=obj.get("mortality_field", base.mortality_field),
        mortality_true_values=tuple(
            v.upper() for v in obj.get("mortality_true_values", _TRUE_VALUES)
        ),
    )


def _norm(value: str) -> str:
    return value.strip().upper()


def derive_labels(visit: VisitRecord, rules: LabelRuleSpec | None = None) -> LabelSet | None:
    """Map a visit's raw outcome fields to a LabelSet.

    Returns None for visits whose disposition value is mapped to "exclude".
    Raises UnmappedDispositionValue for vocabulary not in the rule table.
    """
    rules = rules or LabelRuleSpec()
    arrival = visit.rows(Modality.ARRIVAL)
    if not arrival:
        raise MissingLabelField(visit.visit_id, rules.disposition_field)
    row = arrival[0]
    raw = row.get(rules.disposition_field)
    if raw is None:
        raise MissingLabelField(visit.visit_id, rules.disposition_field)
    mapped = rules.disposition_map.get(_norm(raw))
    if mapped is None:
        raise UnmappedDispositionValue(raw)
    if mapped == EXCLUDE:
        return None
    if mapped == HOME:
        return LabelSet(disposition=0)

    def binary(field_name: str, true_values: tuple[str, ...]) -> int:
        value = row.get(field_name)
        if value is None:
            raise MissingLabelField(visit.visit_id, field_name)
        return 1 if _norm(value) in true_values else 0

    return LabelSet(
        disposition=1,
        discharge_home=binary(rules.discharge_field, rules.discharge_home_values),
        icu=binary(rules.icu_field, rules.icu_true_values),
        mortality=binary(rules.mortality_field, rules.mortality_true_values),
    )


def label_dataset(dataset: Dataset, rules: LabelRuleSpec | None = None) -> Dataset:
    """Derive labels for every visit, dropping excluded dispositions."""
    rules = rules or LabelRuleSpec()
    kept: list[VisitRecord] = []
    diagnostics = list(dataset.diagnostics)
    for visit in dataset.visits:
        labels = derive_labels(visit, rules)
        if labels is None:
            diagnostics.append(f"visit {visit.visit_id}: excluded disposition, dropped")
            continue
        kept.append(
            VisitRecord(visit_id=visit.visit_id, modality_rows=visit.modality_rows, labels=labels)
        )
    return Dataset(visits=kept, provenance=dataset.provenance, diagnostics=diagnostics)


def filter_cohort(dataset: Dataset, task: TaskKind) -> Dataset:
    """Disposition task keeps all visits; decompensation keeps admitted only."""
    if task is TaskKind.DISPOSITION:
        return dataset
    kept = [v for v in dataset.visits if v.labels is not None and v.labels.disposition == 1]
    if not kept:
        warnings.warn("decompensation cohort is empty", EmptyCohortWarning, stacklevel=2)
    return Dataset(
        visits=kept, provenance=dataset.provenance, diagnostics=list(dataset.diagnostics)
    )


def prevalence(dataset: Dataset, task_label: LabelKind) -> float:
    """Fraction of label-1 visits among visits where the label is present."""
    values = [
        v.labels.get(task_label)
        for v in dataset.visits
        if v.labels is not None and v.labels.get(task_label) is not None
    ]
    if not values:
        raise NoLabeledVisits(f"no visits carry label {task_label.value}")
    return sum(values) / len(values)
