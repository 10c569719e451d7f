"""Deterministic train/val/test splitting."""

from __future__ import annotations

import numpy as np

from ..errors import DataError
from .types import Dataset, SplitAssignment


class RatioSumError(DataError):
    pass


def split(
    dataset: Dataset, ratios: tuple[float, float, float] = (0.8, 0.1, 0.1), seed: int = 0
) -> SplitAssignment:
    """Shuffle visit ids with the seed and carve out val/test by floor sizes.

    The remainder after floor-allocating val and test goes to train, so the
    three sets always cover the dataset exactly.
    """
    r_train, r_val, r_test = ratios
    if min(ratios) <= 0:
        raise RatioSumError(f"split ratios must be positive, got {ratios}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise RatioSumError(f"split ratios must sum to 1, got {ratios}")

    ids = dataset.visit_ids()
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(ids))
    shuffled = [ids[i] for i in order]

    n = len(ids)
    n_val = int(n * r_val)
    n_test = int(n * r_test)
    n_train = n - n_val - n_test
    return SplitAssignment(
        train=frozenset(shuffled[:n_train]),
        val=frozenset(shuffled[n_train : n_train + n_val]),
        test=frozenset(shuffled[n_train + n_val :]),
        seed=seed,
    )
