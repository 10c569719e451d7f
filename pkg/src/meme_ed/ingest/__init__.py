"""Loading, validating, labeling, and splitting modality-split ED data."""

from .jsonl import read_dataset, write_dataset
from .labels import (
    EmptyCohortWarning,
    LabelRuleSpec,
    MissingLabelField,
    NoLabeledVisits,
    UnmappedDispositionValue,
    derive_labels,
    filter_cohort,
    label_dataset,
    load_label_rules,
    prevalence,
)
from .loader import DuplicateVisitConflict, MissingColumn, UnreadableFile, load_tables
from .schema import SchemaSpec, default_schema, load_schema, save_schema
from .splitting import RatioSumError, split
from .synth import InvalidConfig, SignalSpec, SynthConfig, load_synth_config, synth_generate
from .types import (
    DECOMPENSATION_LABELS,
    Dataset,
    LabelKind,
    LabelSet,
    Provenance,
    SplitAssignment,
    TaskKind,
    VisitRecord,
)

__all__ = [
    "DECOMPENSATION_LABELS",
    "Dataset",
    "DuplicateVisitConflict",
    "EmptyCohortWarning",
    "InvalidConfig",
    "LabelKind",
    "LabelRuleSpec",
    "LabelSet",
    "MissingColumn",
    "MissingLabelField",
    "NoLabeledVisits",
    "Provenance",
    "RatioSumError",
    "SchemaSpec",
    "SignalSpec",
    "SplitAssignment",
    "SynthConfig",
    "TaskKind",
    "UnmappedDispositionValue",
    "UnreadableFile",
    "VisitRecord",
    "default_schema",
    "derive_labels",
    "filter_cohort",
    "label_dataset",
    "load_label_rules",
    "load_schema",
    "load_synth_config",
    "load_tables",
    "prevalence",
    "read_dataset",
    "save_schema",
    "split",
    "synth_generate",
    "write_dataset",
]
