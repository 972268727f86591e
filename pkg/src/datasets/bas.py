"""Bars-and-stripes datasets.

Label 0 is stripes (active rows), label 1 is bars (active columns).
"""

from typing import List, Sequence, Tuple

import numpy as np

from src.datasets.samples import Sample
from src.errors import DataError
from src.layers.loader import cascade_amplitudes, qdl_loader_angles


def _balanced_labels(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.permutation(np.arange(n) % 2)


def _random_subset(d: int, rng: np.random.Generator) -> np.ndarray:
    """Indicator of a uniformly random non-empty, non-full subset of ``d`` lines."""
    mask = int(rng.integers(1, 2 ** d - 1))
    return np.array([(mask >> i) & 1 for i in range(d)], dtype=np.float64)


def _pattern_factors(label: int, d1: int, d2: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Row and column indicators whose outer product is the pattern."""
    if label == 0:
        return _random_subset(d1, rng), np.ones(d2)
    return np.ones(d1), _random_subset(d2, rng)


def gen_bas(d1: int, d2: int, n: int, seed: int) -> List[Sample]:
    """
    Plain bars-and-stripes images with balanced classes.

    Args:
        d1: Rows
        d2: Columns
        n: Number of samples (>= 1)
        seed: Generator seed

    Returns:
        Samples with pixels in {0, 1}
    """
    if n < 1:
        raise DataError(f"Cannot generate an empty dataset (n={n})")
    if d1 < 2 or d2 < 2:
        raise DataError(f"Images need at least 2x2 pixels, got {d1}x{d2}")
    rng = np.random.default_rng(seed)
    samples = []
    for label in _balanced_labels(n, rng):
        rows, cols = _pattern_factors(int(label), d1, d2, rng)
        samples.append(Sample(np.outer(rows, cols), int(label)))
    return samples


def replay_custom_bas(angles: Sequence[Sequence[float]]) -> np.ndarray:
    """
    Image produced by per-register loader angles.

    Pixels are the outer product of the two single-photon distributions,
    rescaled so the brightest pixel is 1.
    """
    rows, cols = (cascade_amplitudes(a) ** 2 for a in angles)
    image = np.outer(rows, cols)
    return image / image.max()


def gen_custom_bas(n: int, sigma: float = 0.1, seed: int = 0, d1: int = 4, d2: int = 4) -> List[Sample]:
    """
    Bars and stripes with Gaussian noise on the exact loader angles.

    Args:
        n: Number of samples (>= 1)
        sigma: Standard deviation of the angle noise in radians
        seed: Generator seed
        d1: Rows
        d2: Columns

    Returns:
        Rank-1 samples that keep the perturbed angles in ``qdl_params``
    """
    if sigma < 0:
        raise DataError(f"Noise level must be non-negative, got {sigma}")
    if n < 1:
        raise DataError(f"Cannot generate an empty dataset (n={n})")
    rng = np.random.default_rng(seed)
    samples = []
    for label in _balanced_labels(n, rng):
        factors = _pattern_factors(int(label), d1, d2, rng)
        angles = tuple(
            tuple(float(a) for a in np.asarray(qdl_loader_angles(f)) + rng.normal(0.0, sigma, size=len(f) - 1))
            for f in factors
        )
        samples.append(Sample(replay_custom_bas(angles), int(label), angles))
    return samples
