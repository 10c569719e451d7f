"""Attention classifier head, losses, exact gradients, and training."""

from .config import ModelConfig, TrainConfig
from .grads import Gradients, NonFiniteGradient, backward, loss_and_grads
from .losses import bce_multilabel_loss, ce_loss, loss_and_logit_grad
from .network import (
    ForwardTrace,
    NonFiniteActivation,
    ShapeError,
    concat,
    forward,
    predict_proba,
    self_attention,
    sigmoid,
    softmax_proba,
)
from .optimizer import AdamW
from .params import (
    ModelParams,
    TENSOR_ORDER,
    expected_shapes,
    init_params,
    load_checkpoint,
    save_checkpoint,
    validate_shapes,
)
from .training import (
    DivergenceDetected,
    EarlyStopper,
    EmptySplit,
    EpochRecord,
    TrainResult,
    assemble_inputs,
    input_keys,
    train,
    write_history,
)

__all__ = [
    "AdamW",
    "DivergenceDetected",
    "EarlyStopper",
    "EmptySplit",
    "EpochRecord",
    "ForwardTrace",
    "Gradients",
    "ModelConfig",
    "ModelParams",
    "NonFiniteActivation",
    "NonFiniteGradient",
    "ShapeError",
    "TENSOR_ORDER",
    "TrainConfig",
    "TrainResult",
    "assemble_inputs",
    "backward",
    "bce_multilabel_loss",
    "ce_loss",
    "concat",
    "expected_shapes",
    "forward",
    "init_params",
    "input_keys",
    "load_checkpoint",
    "loss_and_grads",
    "loss_and_logit_grad",
    "predict_proba",
    "save_checkpoint",
    "self_attention",
    "sigmoid",
    "softmax_proba",
    "train",
    "validate_shapes",
    "write_history",
]
