"""Labelled images and train/test splits."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import DataError, InsufficientSamplesError


@dataclass(frozen=True)
class Sample:
    """Image in [0, 1] with its class; Custom BAS samples keep their loader angles."""

    pixels: np.ndarray
    label: int
    qdl_params: Optional[Tuple[Tuple[float, ...], ...]] = None

    def __post_init__(self):
        pixels = np.asarray(self.pixels, dtype=np.float64)
        if not np.all(np.isfinite(pixels)):
            raise DataError("Sample pixels must be finite")
        if self.label not in (0, 1):
            raise DataError(f"Sample label must be 0 or 1, got {self.label}")
        object.__setattr__(self, "pixels", pixels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Sample):
            return NotImplemented
        return (
            self.label == other.label
            and self.qdl_params == other.qdl_params
            and self.pixels.shape == other.pixels.shape
            and np.array_equal(self.pixels, other.pixels)
        )

    def __hash__(self) -> int:
        return hash((self.label, self.pixels.tobytes(), self.qdl_params))


def class_counts(samples: Sequence[Sample]) -> Dict[int, int]:
    counts = {0: 0, 1: 0}
    for s in samples:
        counts[s.label] += 1
    return counts


@dataclass
class DatasetSplit:
    train: List[Sample]
    test: List[Sample]
    seed: int
    class_counts: Dict[str, Dict[int, int]] = field(default_factory=dict)


def split(samples: Sequence[Sample], train_n: int, test_n: int, seed: int) -> DatasetSplit:
    """
    Shuffle with ``seed`` and cut into disjoint train and test sets.

    Raises:
        InsufficientSamplesError: If ``train_n + test_n`` exceeds the sample count
    """
    if train_n + test_n > len(samples):
        raise InsufficientSamplesError(
            f"Split needs {train_n} + {test_n} samples, only {len(samples)} available"
        )
    order = np.random.default_rng(seed).permutation(len(samples))
    train = [samples[i] for i in order[:train_n]]
    test = [samples[i] for i in order[train_n:train_n + test_n]]
    return DatasetSplit(
        train=train,
        test=test,
        seed=seed,
        class_counts={"train": class_counts(train), "test": class_counts(test)},
    )
