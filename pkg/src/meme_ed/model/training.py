"""Training loop: mini-batch AdamW with validation-loss early stopping.

Each epoch reshuffles the training set with a seed derived from
(train seed, epoch), records validation loss and F1, and keeps a snapshot
of the best-validation-loss parameters. All arithmetic is serial float64,
so identical (data, config, seed) reruns produce bit-identical parameters.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DataError, NumericalError
from ..ingest.types import (
    DECOMPENSATION_LABELS,
    Dataset,
    SplitAssignment,
    TaskKind,
)
from ..embed.store import EmbeddingStore
from ..modalities import CANONICAL_ORDER, MSEM_KEY
from .config import ModelConfig, TrainConfig
from .grads import loss_and_grads
from .losses import loss_and_logit_grad
from .network import forward, predict_proba
from .optimizer import AdamW
from .params import ModelParams, init_params


class EmptySplit(DataError):
    pass


class DivergenceDetected(NumericalError):
    pass


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    val_loss: float
    val_f1: float


@dataclass
class TrainResult:
    params: ModelParams
    history: list[EpochRecord]
    best_epoch: int
    stopped_early: bool


class EarlyStopper:
    """Stop after `patience` consecutive epochs without a strict improvement."""

    def __init__(self, patience: int):
        self.patience = patience
        self.best = np.inf
        self.since_best = 0
        self.best_epoch = 0

    def update(self, epoch: int, val_loss: float) -> bool:
        """Record an epoch; returns True when training should stop."""
        if val_loss < self.best:
            self.best = val_loss
            self.best_epoch = epoch
            self.since_best = 0
            return False
        self.since_best += 1
        return self.since_best >= self.patience


def input_keys(mode) -> list[str]:
    """Store keys for a mode: "meme", "msem", or an explicit modality subset."""
    if mode == "msem":
        return [MSEM_KEY]
    if mode == "meme":
        return [m.value for m in CANONICAL_ORDER]
    return [m.value for m in mode]


def assemble_inputs(
    dataset: Dataset,
    ids: list[str],
    store: EmbeddingStore,
    task: TaskKind,
    mode="meme",
) -> tuple[np.ndarray, np.ndarray]:
    """Gather (X, y) for the given visit ids in the given order.

    MEME rows concatenate the six modality vectors in canonical order;
    MSEM rows are the single joined-note vector; a modality subset (for
    ablations) concatenates just those vectors. Disposition labels are a
    class-index vector; decompensation labels are an (n, 3) binary matrix.
    """
    by_id = dataset.by_id()
    keys = input_keys(mode)
    rows = []
    labels = []
    for vid in ids:
        visit = by_id.get(vid)
        if visit is None:
            raise DataError(f"split references unknown visit {vid!r}")
        if visit.labels is None:
            raise DataError(f"visit {vid!r} has no labels")
        rows.append(np.concatenate([store.get(vid, key).astype(np.float64) for key in keys]))
        if task is TaskKind.DISPOSITION:
            labels.append(visit.labels.disposition)
        else:
            labels.append([visit.labels.get(kind) for kind in DECOMPENSATION_LABELS])
    x = np.stack(rows) if rows else np.zeros((0, store.d * len(keys)))
    y = np.asarray(labels, dtype=np.float64 if task is TaskKind.DECOMPENSATION else np.int64)
    return x, y


def _f1_at_half(scores: np.ndarray, labels: np.ndarray) -> float:
    preds = scores >= 0.5
    labels = labels.astype(bool)
    tp = int(np.sum(preds & labels))
    fp = int(np.sum(preds & ~labels))
    fn = int(np.sum(~preds & labels))
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def _val_f1(params: ModelParams, x: np.ndarray, y: np.ndarray, task: TaskKind) -> float:
    probs = predict_proba(params, x, task.value)
    if task is TaskKind.DISPOSITION:
        return _f1_at_half(probs[:, 1], y)
    return float(np.mean([_f1_at_half(probs[:, j], y[:, j]) for j in range(y.shape[1])]))


def train(
    dataset: Dataset,
    split: SplitAssignment,
    store: EmbeddingStore,
    model_config: ModelConfig,
    train_config: TrainConfig,
    task: TaskKind = TaskKind.DISPOSITION,
    mode="meme",
) -> TrainResult:
    """Train the classifier head on the assigned splits and return the
    best-validation-loss parameters plus the per-epoch history."""
    order = [vid for vid in dataset.visit_ids() if vid in split.train]
    val_ids = [vid for vid in dataset.visit_ids() if vid in split.val]
    if not order:
        raise EmptySplit("training split is empty")
    if not val_ids:
        raise EmptySplit("validation split is empty")

    x_train, y_train = assemble_inputs(dataset, order, store, task, mode)
    x_val, y_val = assemble_inputs(dataset, val_ids, store, task, mode)
    if x_train.shape[1] != model_config.input_dim:
        raise DataError(
            f"store dimension {x_train.shape[1]} does not match model input "
            f"{model_config.input_dim}"
        )

    loss_kind = train_config.loss_kind(model_config.n_labels)
    params = init_params(model_config)
    n = x_train.shape[0]
    steps_per_epoch = (n + train_config.batch_size - 1) // train_config.batch_size
    optimizer = AdamW(params, train_config, total_steps=steps_per_epoch * train_config.max_epochs)
    stopper = EarlyStopper(train_config.patience)

    history: list[EpochRecord] = []
    best_params = params.copy()
    stopped_early = False

    for epoch in range(1, train_config.max_epochs + 1):
        rng = np.random.default_rng([train_config.seed, epoch])
        perm = rng.permutation(n)
        epoch_loss = 0.0
        for step, start in enumerate(range(0, n, train_config.batch_size)):
            idx = perm[start : start + train_config.batch_size]
            dropout_seed = int(
                np.random.default_rng([train_config.seed, epoch, step]).integers(0, 2**31)
            )
            loss, grads, _ = loss_and_grads(
                x_train[idx],
                y_train[idx],
                params,
                loss_kind,
                training=True,
                dropout_seed=dropout_seed,
            )
            if not np.isfinite(loss):
                raise DivergenceDetected(f"training loss diverged at epoch {epoch}")
            optimizer.step(params, grads)
            epoch_loss += loss * len(idx)
        params.check_finite()

        val_logits, _ = forward(x_val, params, training=False)
        val_loss, _ = loss_and_logit_grad(val_logits, y_val, loss_kind)
        if not np.isfinite(val_loss):
            raise DivergenceDetected(f"validation loss diverged at epoch {epoch}")
        record = EpochRecord(
            epoch=epoch,
            train_loss=epoch_loss / n,
            val_loss=val_loss,
            val_f1=_val_f1(params, x_val, y_val, task),
        )
        history.append(record)

        improved = val_loss < stopper.best
        should_stop = stopper.update(epoch, val_loss)
        if improved:
            best_params = params.copy()
        if should_stop:
            stopped_early = True
            break

    return TrainResult(
        params=best_params,
        history=history,
        best_epoch=stopper.best_epoch,
        stopped_early=stopped_early,
    )


def write_history(history: list[EpochRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "train_loss", "val_loss", "val_f1"])
        for rec in history:
            writer.writerow(
                [rec.epoch, repr(rec.train_loss), repr(rec.val_loss), repr(rec.val_f1)]
            )
