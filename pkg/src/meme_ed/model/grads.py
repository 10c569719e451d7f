"""Exact analytic gradients for every parameter tensor.

The chain runs classifier -> dropout -> ReLU -> FC -> output projection ->
attention mixing (softmax Jacobian) -> Q/K/V projections. Inputs are frozen
embeddings, so no gradient flows into the batch itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NumericalError
from .config import ModelConfig
from .losses import loss_and_logit_grad
from .network import ForwardTrace, forward
from .params import TENSOR_ORDER, ModelParams


class NonFiniteGradient(NumericalError):
    pass


@dataclass
class Gradients:
    w_q: np.ndarray
    w_k: np.ndarray
    w_v: np.ndarray
    w_o: np.ndarray
    w_fc: np.ndarray
    b_fc: np.ndarray
    w_cls: np.ndarray
    b_cls: np.ndarray

    def tensors(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in TENSOR_ORDER}

    def check_finite(self) -> None:
        for name, g in self.tensors().items():
            if not np.isfinite(g).all():
                raise NonFiniteGradient(f"non-finite gradient for {name}")


def backward(dz: np.ndarray, trace: ForwardTrace, params: ModelParams) -> Gradients:
    """Backpropagate d(loss)/d(logits) through the recorded trace."""
    config = params.config

    # Classifier layer.
    g_w_cls = trace.v_dropped.T @ dz
    g_b_cls = dz.sum(axis=0)
    d_dropped = dz @ params.w_cls.T

    # Dropout (inverted scaling) and ReLU.
    if trace.dropout_mask is not None:
        keep = 1.0 - config.dropout_rate
        d_vfc = d_dropped * trace.dropout_mask / keep
    else:
        d_vfc = d_dropped
    d_pre = d_vfc * (trace.pre_fc > 0.0)

    # Fully connected layer.
    g_w_fc = trace.v_attention.T @ d_pre
    g_b_fc = d_pre.sum(axis=0)
    d_vatt = d_pre @ params.w_fc.T

    # Attention output projection.
    b = trace.x.shape[0]
    dy = d_vatt.reshape(b, config.n_modalities, config.d)
    g_w_o = np.einsum("bma,bmd->ad", trace.h, dy)
    dh = dy @ params.w_o.T

    # Attention mixing: h = A v with A = softmax(q k^T / sqrt(d_attn)).
    weights = trace.attention_weights
    d_a = dh @ trace.v.transpose(0, 2, 1)
    d_v = weights.transpose(0, 2, 1) @ dh
    d_scores = weights * (d_a - (d_a * weights).sum(axis=-1, keepdims=True))
    d_scores /= np.sqrt(config.d_attn)
    d_q = d_scores @ trace.k
    d_k = d_scores.transpose(0, 2, 1) @ trace.q

    g_w_q = np.einsum("bmd,bma->da", trace.x, d_q)
    g_w_k = np.einsum("bmd,bma->da", trace.x, d_k)
    g_w_v = np.einsum("bmd,bma->da", trace.x, d_v)

    grads = Gradients(
        w_q=g_w_q,
        w_k=g_w_k,
        w_v=g_w_v,
        w_o=g_w_o,
        w_fc=g_w_fc,
        b_fc=g_b_fc,
        w_cls=g_w_cls,
        b_cls=g_b_cls,
    )
    grads.check_finite()
    return grads


def loss_and_grads(
    batch: np.ndarray,
    labels: np.ndarray,
    params: ModelParams,
    loss_kind: str,
    training: bool = False,
    dropout_seed: int | None = None,
    config: ModelConfig | None = None,
) -> tuple[float, Gradients, ForwardTrace]:
    """One forward/backward pass; the mean loss gradient for each tensor."""
    logits, trace = forward(
        batch, params, config=config, training=training, dropout_seed=dropout_seed
    )
    loss, dz = loss_and_logit_grad(logits, labels, loss_kind)
    if not np.isfinite(loss):
        raise NonFiniteGradient("non-finite loss")
    return loss, backward(dz, trace, params), trace
