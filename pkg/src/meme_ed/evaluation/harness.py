"""Test-set evaluation and the per-modality ablation study."""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np

from ..errors import DataError
from ..embed.store import EmbeddingStore
from ..ingest.types import (
    DECOMPENSATION_LABELS,
    Dataset,
    SplitAssignment,
    TaskKind,
)
from ..modalities import Modality
from ..model.config import ModelConfig, TrainConfig
from ..model.network import predict_proba
from ..model.params import ModelParams
from ..model.training import assemble_inputs, train
from .bootstrap import MetricReport, bootstrap_ci
from .metrics import auprc, auroc, f1

METRIC_NAMES = ("f1", "auroc", "auprc")

#: label name -> list of per-metric reports
Reports = dict[str, dict[str, MetricReport]]


@dataclass(frozen=True)
class AblationResult:
    subset: tuple[Modality, ...]
    reports: Reports

    def name(self) -> str:
        return "+".join(m.value for m in self.subset)


def _metric_fn(name: str):
    if name == "f1":
        return partial(f1, threshold=0.5)
    if name == "auroc":
        return auroc
    if name == "auprc":
        return auprc
    raise DataError(f"unknown metric {name!r}")


def score_reports(
    scores: np.ndarray,
    labels: np.ndarray,
    n_boot: int = 1000,
    level: float = 0.95,
    seed: int = 0,
) -> dict[str, MetricReport]:
    """All three metrics with bootstrap intervals for one score/label column."""
    out: dict[str, MetricReport] = {}
    for name in METRIC_NAMES:
        out[name] = bootstrap_ci(
            _metric_fn(name), scores, labels, n=n_boot, level=level, seed=seed, metric_name=name
        )
    return out


def evaluate_model(
    params: ModelParams,
    dataset: Dataset,
    ids: list[str],
    store: EmbeddingStore,
    task: TaskKind,
    mode="meme",
    n_boot: int = 1000,
    level: float = 0.95,
    seed: int = 0,
) -> Reports:
    """Score the given visits and report per-label metric tables.

    Disposition reports a single "disposition" row from the positive-class
    probability; decompensation reports one row per sigmoid head.
    """
    x, y = assemble_inputs(dataset, ids, store, task, mode)
    probs = predict_proba(params, x, task.value)
    if task is TaskKind.DISPOSITION:
        return {"disposition": score_reports(probs[:, 1], y, n_boot, level, seed)}
    out: Reports = {}
    for j, kind in enumerate(DECOMPENSATION_LABELS):
        try:
            out[kind.value] = score_reports(probs[:, j], y[:, j], n_boot, level, seed)
        except DataError as exc:
            raise DataError(f"label {kind.value}: {exc}") from exc
    return out


def ablate(
    dataset: Dataset,
    store: EmbeddingStore,
    subsets: list[tuple[Modality, ...]],
    model_config: ModelConfig,
    train_config: TrainConfig,
    split: SplitAssignment,
    task: TaskKind = TaskKind.DISPOSITION,
    n_boot: int = 1000,
    level: float = 0.95,
    seed: int = 0,
) -> list[AblationResult]:
    """Train one model per modality subset on identical splits and seed.

    model_config fixes everything but n_modalities, which follows the subset
    size; the full six-modality entry reproduces the headline model.
    """
    results = []
    test_ids = [vid for vid in dataset.visit_ids() if vid in split.test]
    for subset in subsets:
        if not subset:
            raise DataError("ablation subsets must be non-empty")
        config = ModelConfig(
            n_modalities=len(subset),
            d=model_config.d,
            d_attn=model_config.d_attn,
            d_hidden=model_config.d_hidden,
            n_labels=model_config.n_labels,
            dropout_rate=model_config.dropout_rate,
            seed=model_config.seed,
        )
        result = train(dataset, split, store, config, train_config, task=task, mode=subset)
        reports = evaluate_model(
            result.params, dataset, test_ids, store, task, subset, n_boot, level, seed
        )
        results.append(AblationResult(subset=subset, reports=reports))
    return results
