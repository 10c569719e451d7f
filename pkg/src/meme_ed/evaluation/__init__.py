"""Metrics, bootstrap intervals, ablations, and shift reports."""

from .bootstrap import AllResamplesDegenerate, MetricReport, bootstrap_ci
from .harness import (
    METRIC_NAMES,
    AblationResult,
    Reports,
    ablate,
    evaluate_model,
    score_reports,
)
from .metrics import LengthMismatch, NoPositives, SingleClassError, auprc, auroc, f1
from .reports import (
    write_ablation_csv,
    write_ablation_table_csv,
    write_metrics_csv,
    write_metrics_json,
    write_shift_csv,
    write_shift_json,
)
from .shift import CategoricalShift, FiveNumber, NumericShift, ShiftReport, shift_report

__all__ = [
    "AblationResult",
    "AllResamplesDegenerate",
    "CategoricalShift",
    "FiveNumber",
    "LengthMismatch",
    "METRIC_NAMES",
    "MetricReport",
    "NoPositives",
    "NumericShift",
    "Reports",
    "ShiftReport",
    "SingleClassError",
    "ablate",
    "auprc",
    "auroc",
    "bootstrap_ci",
    "evaluate_model",
    "f1",
    "score_reports",
    "shift_report",
    "write_ablation_csv",
    "write_ablation_table_csv",
    "write_metrics_csv",
    "write_metrics_json",
    "write_shift_csv",
    "write_shift_json",
]
