"""Cross-dataset distribution-shift report.

For every (modality, field) seen in either dataset: categorical fields get
unique-value set sizes and the intersection size; numeric fields (every
non-absent value parses as a float) get five-number summaries per dataset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..ingest.types import Dataset
from ..modalities import CANONICAL_ORDER, Modality


@dataclass(frozen=True)
class FiveNumber:
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    count: int

    @classmethod
    def of(cls, values: list[float]) -> "FiveNumber":
        arr = np.asarray(values, dtype=np.float64)
        q1, med, q3 = np.percentile(arr, [25, 50, 75])
        return cls(
            minimum=float(arr.min()),
            q1=float(q1),
            median=float(med),
            q3=float(q3),
            maximum=float(arr.max()),
            count=len(values),
        )


@dataclass(frozen=True)
class CategoricalShift:
    modality: Modality
    field: str
    a_size: int
    b_size: int
    intersection: int


@dataclass(frozen=True)
class NumericShift:
    modality: Modality
    field: str
    a: FiveNumber | None
    b: FiveNumber | None


@dataclass(frozen=True)
class ShiftReport:
    categorical: list[CategoricalShift]
    numeric: list[NumericShift]


def _collect(dataset: Dataset) -> dict[tuple[Modality, str], list[str]]:
    values: dict[tuple[Modality, str], list[str]] = {}
    for visit in dataset.visits:
        for modality in CANONICAL_ORDER:
            for row in visit.rows(modality):
                for field, value in row.items():
                    values.setdefault((modality, field), []).append(value)
    return values


def _as_floats(values: list[str]) -> list[float] | None:
    out = []
    for v in values:
        try:
            out.append(float(v))
        except ValueError:
            return None
    return out if out else None


def shift_report(dataset_a: Dataset, dataset_b: Dataset) -> ShiftReport:
    values_a = _collect(dataset_a)
    values_b = _collect(dataset_b)
    keys = sorted(set(values_a) | set(values_b), key=lambda k: (k[0].value, k[1]))

    categorical: list[CategoricalShift] = []
    numeric: list[NumericShift] = []
    for key in keys:
        modality, field = key
        a_vals = values_a.get(key, [])
        b_vals = values_b.get(key, [])
        a_floats = _as_floats(a_vals)
        b_floats = _as_floats(b_vals)
        both_numeric = (a_floats is not None or not a_vals) and (
            b_floats is not None or not b_vals
        )
        if both_numeric and (a_floats is not None or b_floats is not None):
            numeric.append(
                NumericShift(
                    modality=modality,
                    field=field,
                    a=FiveNumber.of(a_floats) if a_floats else None,
                    b=FiveNumber.of(b_floats) if b_floats else None,
                )
            )
        else:
            set_a = set(a_vals)
            set_b = set(b_vals)
            categorical.append(
                CategoricalShift(
                    modality=modality,
                    field=field,
                    a_size=len(set_a),
                    b_size=len(set_b),
                    intersection=len(set_a & set_b),
                )
            )
    return ShiftReport(categorical=categorical, numeric=numeric)
