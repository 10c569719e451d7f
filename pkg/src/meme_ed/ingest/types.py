"""Core record types for modality-split ED visit data.

Row values are kept exactly as read from the source tables (strings), so
downstream note rendering can reproduce them verbatim. A field that is
missing from a row simply has no key; empty CSV cells are normalized to
absent at load time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..errors import DataError
from ..modalities import CANONICAL_ORDER, Modality

Row = dict[str, str]


class TaskKind(str, Enum):
    DISPOSITION = "disposition"
    DECOMPENSATION = "decompensation"


class LabelKind(str, Enum):
    DISPOSITION = "disposition"
    DISCHARGE_HOME = "discharge_home"
    ICU = "icu"
    MORTALITY = "mortality"


#: The three post-admission outcome labels, in reporting order.
DECOMPENSATION_LABELS: tuple[LabelKind, ...] = (
    LabelKind.DISCHARGE_HOME,
    LabelKind.ICU,
    LabelKind.MORTALITY,
)


class LabelConsistencyError(DataError):
    """Decompensation labels must exist iff the visit was admitted."""


@dataclass(frozen=True)
class LabelSet:
    """Outcome labels for one visit.

    ``disposition`` is 1 for admitted, 0 for discharged home. The three
    decompensation labels are present exactly when ``disposition == 1``.
    """

    disposition: int
    discharge_home: int | None = None
    icu: int | None = None
    mortality: int | None = None

    def __post_init__(self) -> None:
        if self.disposition not in (0, 1):
            raise LabelConsistencyError(f"disposition must be 0/1, got {self.disposition!r}")
        decomp = (self.discharge_home, self.icu, self.mortality)
        if self.disposition == 1:
            if any(v not in (0, 1) for v in decomp):
                raise LabelConsistencyError(
                    "admitted visit must carry all three decompensation labels"
                )
        else:
            if any(v is not None for v in decomp):
                raise LabelConsistencyError(
                    "discharged visit must not carry decompensation labels"
                )

    def get(self, kind: LabelKind) -> int | None:
        return getattr(self, kind.value)


@dataclass
class VisitRecord:
    """One ED visit: opaque key, per-modality raw rows, and labels.

    ``modality_rows`` may be empty for any modality (missingness is legal).
    Vitals and pyxis rows are stored time-ascending.
    """

    visit_id: str
    modality_rows: dict[Modality, list[Row]] = field(default_factory=dict)
    labels: LabelSet | None = None

    def __post_init__(self) -> None:
        if not self.visit_id:
            raise DataError("visit_id must be non-empty")
        for m in CANONICAL_ORDER:
            self.modality_rows.setdefault(m, [])

    def rows(self, modality: Modality) -> list[Row]:
        return self.modality_rows.get(modality, [])


@dataclass(frozen=True)
class Provenance:
    source: str = "real"  # "real" | "synthetic"
    schema_version: int = 1


@dataclass
class Dataset:
    """An ordered collection of visits with unique visit ids."""

    visits: list[VisitRecord]
    provenance: Provenance = field(default_factory=Provenance)
    diagnostics: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for v in self.visits:
            if v.visit_id in seen:
                raise DataError(f"duplicate visit_id in dataset: {v.visit_id!r}")
            seen.add(v.visit_id)

    def __len__(self) -> int:
        return len(self.visits)

    def visit_ids(self) -> list[str]:
        return [v.visit_id for v in self.visits]

    def by_id(self) -> dict[str, VisitRecord]:
        return {v.visit_id: v for v in self.visits}


@dataclass(frozen=True)
class SplitAssignment:
    """Disjoint train/val/test visit-id sets covering a dataset."""

    train: frozenset[str]
    val: frozenset[str]
    test: frozenset[str]
    seed: int

    def __post_init__(self) -> None:
        if self.train & self.val or self.train & self.test or self.val & self.test:
            raise DataError("split sets must be pairwise disjoint")

    @property
    def all_ids(self) -> frozenset[str]:
        return self.train | self.val | self.test
