"""Model and training hyperparameter containers."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DataError


@dataclass(frozen=True)
class ModelConfig:
    """Shapes and regularization for the attention classifier head.

    n_modalities is 6 for the multi-embedding model and 1 for the
    single-embedding variant. n_labels selects the output head: 2 gives a
    softmax pair (disposition), 3 gives independent sigmoid heads
    (decompensation).
    """

    n_modalities: int
    d: int
    d_attn: int
    d_hidden: int
    n_labels: int
    dropout_rate: float = 0.3
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("n_modalities", "d", "d_attn", "d_hidden", "n_labels"):
            if getattr(self, name) < 1:
                raise DataError(f"{name} must be >= 1, got {getattr(self, name)}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise DataError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")

    @property
    def input_dim(self) -> int:
        return self.n_modalities * self.d


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 64
    lr: float = 5e-5
    max_epochs: int = 10
    patience: int = 2
    weight_decay: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0
    loss: str = "auto"  # "ce" | "bce" | "auto" (pick from n_labels)

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise DataError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.lr <= 0:
            raise DataError(f"lr must be > 0, got {self.lr}")
        if self.max_epochs < 1:
            raise DataError(f"max_epochs must be >= 1, got {self.max_epochs}")
        if self.patience < 1:
            raise DataError(f"patience must be >= 1, got {self.patience}")
        if self.loss not in ("auto", "ce", "bce"):
            raise DataError(f"loss must be auto/ce/bce, got {self.loss!r}")

    def loss_kind(self, n_labels: int) -> str:
        if self.loss != "auto":
            return self.loss
        return "ce" if n_labels == 2 else "bce"
