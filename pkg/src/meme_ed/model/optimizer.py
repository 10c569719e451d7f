"""AdamW with decoupled weight decay and a linear learning-rate decay.

The schedule multiplies the base rate by (total_steps - k) / total_steps at
update k (0-based), reaching zero after the final planned step. Biases are
excluded from weight decay.
"""

from __future__ import annotations

import numpy as np

from .config import TrainConfig
from .grads import Gradients
from .params import TENSOR_ORDER, ModelParams


class AdamW:
    def __init__(self, params: ModelParams, config: TrainConfig, total_steps: int):
        self.config = config
        self.total_steps = max(1, total_steps)
        self.step_count = 0
        self._m = {n: np.zeros_like(getattr(params, n)) for n in TENSOR_ORDER}
        self._v = {n: np.zeros_like(getattr(params, n)) for n in TENSOR_ORDER}

    def current_lr(self) -> float:
        remaining = max(0, self.total_steps - self.step_count)
        return self.config.lr * remaining / self.total_steps

    def step(self, params: ModelParams, grads: Gradients) -> None:
        lr = self.current_lr()
        self.step_count += 1
        t = self.step_count
        c = self.config
        bias1 = 1.0 - c.beta1**t
        bias2 = 1.0 - c.beta2**t
        for name in TENSOR_ORDER:
            g = getattr(grads, name)
            m = self._m[name]
            v = self._v[name]
            m *= c.beta1
            m += (1.0 - c.beta1) * g
            v *= c.beta2
            v += (1.0 - c.beta2) * g * g
            tensor = getattr(params, name)
            if c.weight_decay > 0.0 and not name.startswith("b_"):
                tensor *= 1.0 - lr * c.weight_decay
            tensor -= lr * (m / bias1) / (np.sqrt(v / bias2) + c.eps)
