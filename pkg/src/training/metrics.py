"""Accuracy, loss records, confusion matrices and distribution similarity."""

from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import torch

from src.errors import DimensionError

ArrayLike = Union[np.ndarray, torch.Tensor, Sequence[float]]

METRIC_COLUMNS = ("epoch", "train_loss", "train_acc", "test_loss", "test_acc")


def _numpy(values: ArrayLike) -> np.ndarray:
    if isinstance(values, torch.Tensor):
        return values.detach().cpu().numpy()
    return np.asarray(values)


@dataclass
class EpochRecord:
    """Losses and accuracies after one epoch (epoch 0 is the initialization)."""
    epoch: int
    train_loss: float
    train_acc: float
    test_loss: float
    test_acc: float

    def to_row(self) -> Dict[str, float]:
        return asdict(self)


@dataclass
class ConfusionMatrix:
    """``counts[predicted][true]``; ``normalized`` divides each column by its class count."""
    counts: np.ndarray
    normalized: np.ndarray

    @property
    def class_counts(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    def to_dict(self) -> Dict[str, List[List[float]]]:
        return {"counts": self.counts.tolist(), "normalized": self.normalized.tolist()}


@dataclass
class Metrics:
    records: List[EpochRecord] = field(default_factory=list)
    confusion: Optional[ConfusionMatrix] = None
    similarities: List[float] = field(default_factory=list)

    @property
    def final(self) -> Optional[EpochRecord]:
        return self.records[-1] if self.records else None

    def rows(self) -> List[Dict[str, float]]:
        return [r.to_row() for r in self.records]


def predictions(probabilities: ArrayLike) -> np.ndarray:
    """Arg-max class per row; ties go to class 0."""
    probs = _numpy(probabilities)
    return (probs[..., 1] > probs[..., 0]).astype(np.int64)


def accuracy(probabilities: ArrayLike, labels: ArrayLike) -> float:
    labels = _numpy(labels).astype(np.int64)
    if labels.size == 0:
        return 0.0
    return float(np.mean(predictions(probabilities) == labels))


def similarity(p: ArrayLike, q: ArrayLike) -> float:
    """
    Overlap ``sum_x sqrt(p(x) q(x))`` of two distributions.

    Raises:
        DimensionError: If the lengths differ
    """
    p, q = _numpy(p).astype(np.float64), _numpy(q).astype(np.float64)
    if p.shape != q.shape:
        raise DimensionError(f"Distributions of length {p.shape} and {q.shape} cannot be compared")
    return float(np.sum(np.sqrt(np.clip(p, 0.0, None) * np.clip(q, 0.0, None))))


def confusion(predicted: ArrayLike, labels: ArrayLike, n_classes: int = 2) -> ConfusionMatrix:
    """Counts and per-true-class normalized columns."""
    predicted = _numpy(predicted).astype(np.int64).reshape(-1)
    labels = _numpy(labels).astype(np.int64).reshape(-1)
    if predicted.shape != labels.shape:
        raise DimensionError("Predictions and labels differ in length")
    counts = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(counts, (predicted, labels), 1)
    totals = counts.sum(axis=0, keepdims=True)
    normalized = np.divide(counts, totals, out=np.zeros(counts.shape, dtype=np.float64), where=totals > 0)
    return ConfusionMatrix(counts, normalized)
