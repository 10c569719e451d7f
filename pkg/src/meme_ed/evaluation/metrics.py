"""Binary classification metrics: F1, AUROC, AUPRC.

AUROC is the Mann-Whitney statistic (ties count half), computed from
tie-averaged ranks; this equals exact pos/neg pair enumeration. AUPRC is
average precision (no trapezoidal interpolation); score ties are broken by
stable original order so results are reproducible across implementations.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataError


class LengthMismatch(DataError):
    pass


class SingleClassError(DataError):
    pass


class NoPositives(DataError):
    pass


def _check(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if s.ndim != 1 or y.ndim != 1:
        raise LengthMismatch("scores and labels must be 1-D")
    if s.shape[0] != y.shape[0]:
        raise LengthMismatch(f"{s.shape[0]} scores vs {y.shape[0]} labels")
    if s.shape[0] < 1:
        raise LengthMismatch("need at least one sample")
    if not np.isin(y, (0, 1)).all():
        raise DataError("labels must be binary 0/1")
    return s, y.astype(np.int64)


def f1(scores, labels, threshold: float = 0.5) -> float:
    """F1 = 2TP / (2TP + FP + FN); 0 when the denominator is 0."""
    s, y = _check(scores, labels)
    preds = s >= threshold
    pos = y == 1
    tp = int(np.sum(preds & pos))
    fp = int(np.sum(preds & ~pos))
    fn = int(np.sum(~preds & pos))
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def _tie_averaged_ranks(s: np.ndarray) -> np.ndarray:
    """1-based ranks, ties sharing the average of their rank range."""
    order = np.argsort(s, kind="mergesort")
    ranks = np.empty(len(s), dtype=np.float64)
    sorted_s = s[order]
    i = 0
    while i < len(s):
        j = i
        while j + 1 < len(s) and sorted_s[j + 1] == sorted_s[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def auroc(scores, labels) -> float:
    """P(score_pos > score_neg) + 0.5 * P(tie) over all pos/neg pairs."""
    s, y = _check(scores, labels)
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassError("AUROC needs at least one positive and one negative")
    ranks = _tie_averaged_ranks(s)
    u = ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def auprc(scores, labels) -> float:
    """Average precision: mean of precision-at-rank over the positives,
    ranked by descending score with original order breaking ties."""
    s, y = _check(scores, labels)
    n_pos = int(y.sum())
    if n_pos == 0:
        raise NoPositives("AUPRC needs at least one positive")
    order = np.argsort(-s, kind="mergesort")  # stable: ties keep input order
    ranked = y[order]
    tp_cum = np.cumsum(ranked)
    precision = tp_cum / np.arange(1, len(y) + 1)
    return float(precision[ranked == 1].sum() / n_pos)
