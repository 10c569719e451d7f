"""Numerically stable cross-entropy and multilabel sigmoid BCE.

Both losses return the batch mean; BCE additionally averages over labels so
learning rates stay comparable between the two tasks. Gradients here are
with respect to the logits and include the mean normalization.
"""

from __future__ import annotations

import numpy as np

from .network import ShapeError, sigmoid, softmax_proba


def _logsumexp_rows(logits: np.ndarray) -> np.ndarray:
    m = logits.max(axis=1, keepdims=True)
    return (m + np.log(np.exp(logits - m).sum(axis=1, keepdims=True)))[:, 0]


def ce_loss(logits: np.ndarray, labels: np.ndarray) -> float:
    """Mean softmax cross-entropy; labels are class indices."""
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels)
    if logits.ndim != 2:
        raise ShapeError(f"logits must be 2-D, got shape {logits.shape}")
    if labels.shape != (logits.shape[0],):
        raise ShapeError(f"labels shape {labels.shape} does not match batch {logits.shape[0]}")
    lse = _logsumexp_rows(logits)
    picked = logits[np.arange(logits.shape[0]), labels.astype(int)]
    return float(np.mean(lse - picked))


def ce_loss_grad(logits: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """d(mean CE)/d(logits): (softmax - onehot) / B."""
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels).astype(int)
    probs = softmax_proba(logits)
    grad = probs.copy()
    grad[np.arange(logits.shape[0]), labels] -= 1.0
    return grad / logits.shape[0]


def bce_multilabel_loss(logits: np.ndarray, labels: np.ndarray) -> float:
    """Per-label sigmoid BCE, mean over labels then mean over batch."""
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if logits.shape != labels.shape:
        raise ShapeError(f"logits {logits.shape} and labels {labels.shape} must match")
    # max(z,0) - z*y + log1p(exp(-|z|)) is exact and overflow-free
    per_element = np.maximum(logits, 0.0) - logits * labels + np.log1p(np.exp(-np.abs(logits)))
    return float(per_element.mean())


def bce_multilabel_grad(logits: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """d(mean BCE)/d(logits): (sigmoid(z) - y) / (B * L)."""
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    return (sigmoid(logits) - labels) / logits.size


def loss_and_logit_grad(logits: np.ndarray, labels: np.ndarray, kind: str) -> tuple[float, np.ndarray]:
    if kind == "ce":
        return ce_loss(logits, labels), ce_loss_grad(logits, labels)
    if kind == "bce":
        return bce_multilabel_loss(logits, labels), bce_multilabel_grad(logits, labels)
    raise ShapeError(f"unknown loss kind {kind!r}")
