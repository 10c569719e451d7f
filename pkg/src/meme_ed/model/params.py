"""Parameter tensors and checkpoint serialization.

Checkpoint layout: u32 little-endian JSON header length, UTF-8 JSON header
(config, epoch, metrics, tensor order), then the tensors concatenated as
little-endian float64 in declared order.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from ..errors import DataError, NumericalError
from .config import ModelConfig

TENSOR_ORDER = ("w_q", "w_k", "w_v", "w_o", "w_fc", "b_fc", "w_cls", "b_cls")


@dataclass
class ModelParams:
    config: ModelConfig
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

    def copy(self) -> "ModelParams":
        return ModelParams(
            config=self.config, **{k: v.copy() for k, v in self.tensors().items()}
        )

    def check_finite(self) -> None:
        for name, tensor in self.tensors().items():
            if not np.isfinite(tensor).all():
                raise NumericalError(f"non-finite values in parameter {name}")

    def equals(self, other: "ModelParams") -> bool:
        return self.config == other.config and all(
            np.array_equal(getattr(self, n), getattr(other, n)) for n in TENSOR_ORDER
        )


def expected_shapes(config: ModelConfig) -> dict[str, tuple[int, ...]]:
    return {
        "w_q": (config.d, config.d_attn),
        "w_k": (config.d, config.d_attn),
        "w_v": (config.d, config.d_attn),
        "w_o": (config.d_attn, config.d),
        "w_fc": (config.input_dim, config.d_hidden),
        "b_fc": (config.d_hidden,),
        "w_cls": (config.d_hidden, config.n_labels),
        "b_cls": (config.n_labels,),
    }


def init_params(config: ModelConfig) -> ModelParams:
    """Seeded Gaussian init scaled by 1/sqrt(fan_in); biases start at zero."""
    rng = np.random.default_rng(config.seed)
    shapes = expected_shapes(config)
    tensors: dict[str, np.ndarray] = {}
    for name, shape in shapes.items():
        if name.startswith("b_"):
            tensors[name] = np.zeros(shape, dtype=np.float64)
        else:
            fan_in = shape[0]
            tensors[name] = rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=shape)
    return ModelParams(config=config, **tensors)


def validate_shapes(params: ModelParams) -> None:
    for name, shape in expected_shapes(params.config).items():
        actual = getattr(params, name).shape
        if actual != shape:
            raise DataError(f"parameter {name} has shape {actual}, expected {shape}")


def _config_to_json(config: ModelConfig) -> dict:
    return {f.name: getattr(config, f.name) for f in fields(config)}


def save_checkpoint(
    params: ModelParams,
    path: str | Path,
    epoch: int | None = None,
    metrics: dict[str, float] | None = None,
) -> None:
    header = {
        "format": "meme-checkpoint",
        "version": 1,
        "config": _config_to_json(params.config),
        "epoch": epoch,
        "metrics": metrics or {},
        "tensor_order": list(TENSOR_ORDER),
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        for name in TENSOR_ORDER:
            fh.write(np.ascontiguousarray(getattr(params, name), dtype="<f8").tobytes())


def load_checkpoint(path: str | Path) -> tuple[ModelParams, dict]:
    with open(path, "rb") as fh:
        raw = fh.read(4)
        if len(raw) < 4:
            raise DataError(f"{path}: checkpoint header truncated")
        (header_len,) = struct.unpack("<I", raw)
        header_bytes = fh.read(header_len)
        if len(header_bytes) < header_len:
            raise DataError(f"{path}: checkpoint header truncated")
        try:
            header = json.loads(header_bytes.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise DataError(f"{path}: bad checkpoint header: {exc}") from exc
        if header.get("format") != "meme-checkpoint":
            raise DataError(f"{path}: not a checkpoint file")
        config = ModelConfig(**header["config"])
        shapes = expected_shapes(config)
        tensors: dict[str, np.ndarray] = {}
        for name in header.get("tensor_order", TENSOR_ORDER):
            shape = shapes[name]
            n = int(np.prod(shape))
            buf = fh.read(8 * n)
            if len(buf) < 8 * n:
                raise DataError(f"{path}: tensor {name} truncated")
            tensors[name] = np.frombuffer(buf, dtype="<f8").reshape(shape).copy()
        trailing = fh.read(1)
        if trailing:
            raise DataError(f"{path}: trailing bytes after tensors")
    params = ModelParams(config=config, **tensors)
    validate_shapes(params)
    return params, header
