"""Forward pass: concat -> self-attention over modality rows -> FC+ReLU ->
classifier logits.

Attention runs over the M modality rows of dimension d (a single head,
scaled dot-product, no positional encoding, residual, or layer norm): with
frozen per-modality embeddings the interesting structure is across concept
vectors, and attending over a flat 1-token sequence would be vacuous.
All math is float64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError, NumericalError
from .config import ModelConfig
from .params import ModelParams, validate_shapes


class ShapeError(DataError):
    pass


class NonFiniteActivation(NumericalError):
    pass


@dataclass
class ForwardTrace:
    """Intermediate activations kept for inspection and the backward pass."""

    x: np.ndarray  # (B, M, d) modality rows
    q: np.ndarray  # (B, M, d_attn)
    k: np.ndarray  # (B, M, d_attn)
    v: np.ndarray  # (B, M, d_attn)
    attention_weights: np.ndarray  # (B, M, M), rows sum to 1
    h: np.ndarray  # (B, M, d_attn) attention-mixed values
    v_concat: np.ndarray  # (B, M*d)
    v_attention: np.ndarray  # (B, M*d)
    pre_fc: np.ndarray  # (B, d_hidden) pre-ReLU
    v_fc: np.ndarray  # (B, d_hidden) post-ReLU, pre-dropout
    dropout_mask: np.ndarray | None  # (B, d_hidden) float 0/1, None in eval
    v_dropped: np.ndarray  # (B, d_hidden) what the classifier saw
    z: np.ndarray  # (B, n_labels) logits


def concat(vectors: list[np.ndarray] | np.ndarray) -> np.ndarray:
    """Join M equal-length vectors into one, segments in input order."""
    arrays = [np.asarray(v, dtype=np.float64) for v in vectors]
    if not arrays:
        raise ShapeError("concat needs at least one vector")
    d = arrays[0].shape
    if any(a.shape != d for a in arrays):
        raise ShapeError(f"vectors disagree in shape: {[a.shape for a in arrays]}")
    if len(d) != 1:
        raise ShapeError(f"concat expects 1-D vectors, got shape {d}")
    return np.concatenate(arrays)


def _softmax_rows(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def self_attention(
    v_concat: np.ndarray, params: ModelParams
) -> tuple[np.ndarray, np.ndarray]:
    """Single-sample attention: returns (v_attention, attention_weights)."""
    config = params.config
    validate_shapes(params)
    vec = np.asarray(v_concat, dtype=np.float64)
    if vec.shape != (config.input_dim,):
        raise ShapeError(f"expected concat vector of length {config.input_dim}, got {vec.shape}")
    out, weights, _ = _attend(vec[None, :], params)
    return out.reshape(-1), weights[0]


def _attend(batch: np.ndarray, params: ModelParams) -> tuple[np.ndarray, np.ndarray, dict]:
    config = params.config
    b = batch.shape[0]
    x = batch.reshape(b, config.n_modalities, config.d)
    q = x @ params.w_q
    k = x @ params.w_k
    v = x @ params.w_v
    scores = (q @ k.transpose(0, 2, 1)) / np.sqrt(config.d_attn)
    weights = _softmax_rows(scores)
    h = weights @ v
    y = h @ params.w_o
    return y.reshape(b, config.input_dim), weights, {"x": x, "q": q, "k": k, "v": v, "h": h}


def forward(
    batch: np.ndarray,
    params: ModelParams,
    config: ModelConfig | None = None,
    training: bool = False,
    dropout_seed: int | None = None,
) -> tuple[np.ndarray, ForwardTrace]:
    """Run the full head on a (B, M*d) batch; returns (logits, trace).

    Dropout applies to the post-ReLU hidden vector only when training; the
    mask is drawn from dropout_seed so repeated calls with the same seed are
    identical.
    """
    config = config or params.config
    if config != params.config:
        raise ShapeError("config does not match the params' config")
    validate_shapes(params)
    batch = np.asarray(batch, dtype=np.float64)
    if batch.ndim != 2 or batch.shape[1] != config.input_dim:
        raise ShapeError(
            f"batch must be (B, {config.input_dim}), got {batch.shape}"
        )
    if not np.isfinite(batch).all():
        raise NonFiniteActivation("non-finite values in input batch")

    v_attention, weights, inner = _attend(batch, params)
    pre_fc = v_attention @ params.w_fc + params.b_fc
    v_fc = np.maximum(pre_fc, 0.0)

    dropout_mask: np.ndarray | None = None
    v_dropped = v_fc
    if training and config.dropout_rate > 0.0:
        rng = np.random.default_rng(config.seed if dropout_seed is None else dropout_seed)
        keep = 1.0 - config.dropout_rate
        dropout_mask = (rng.random(v_fc.shape) < keep).astype(np.float64)
        v_dropped = v_fc * dropout_mask / keep

    z = v_dropped @ params.w_cls + params.b_cls
    if not np.isfinite(z).all():
        raise NonFiniteActivation("non-finite logits")

    trace = ForwardTrace(
        x=inner["x"],
        q=inner["q"],
        k=inner["k"],
        v=inner["v"],
        attention_weights=weights,
        h=inner["h"],
        v_concat=batch,
        v_attention=v_attention,
        pre_fc=pre_fc,
        v_fc=v_fc,
        dropout_mask=dropout_mask,
        v_dropped=v_dropped,
        z=z,
    )
    return z, trace


def softmax_proba(logits: np.ndarray) -> np.ndarray:
    return _softmax_rows(np.asarray(logits, dtype=np.float64))


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def predict_proba(params: ModelParams, batch: np.ndarray, task: str) -> np.ndarray:
    """Softmax pair for disposition, three independent sigmoids otherwise."""
    logits, _ = forward(batch, params, training=False)
    if task == "disposition":
        if logits.shape[1] != 2:
            raise ShapeError(f"disposition expects 2 logits, got {logits.shape[1]}")
        return softmax_proba(logits)
    if task == "decompensation":
        return sigmoid(logits)
    raise ShapeError(f"unknown task {task!r}")
