"""Exhaustive search for the readout binning that best fits fixed model outputs."""

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Sequence, Union

import numpy as np
import torch

from src.errors import DimensionError, InsufficientSamplesError, ParameterError
from src.layers.readout import ReadoutBinning, ReadoutStrategy, collision_free_configurations, readout
from src.training.metrics import accuracy
from src.utils.logger import logger


@dataclass
class ReadoutSearchResult:
    binning: ReadoutBinning
    train_accuracy: float
    candidates_evaluated: int

    def to_dict(self) -> Dict:
        return {
            "binning": self.binning.to_dict(),
            "train_accuracy": self.train_accuracy,
            "candidates_evaluated": self.candidates_evaluated,
        }


def cluster_candidates(n_events: int) -> List[tuple]:
    """Class-0 event sets with ``floor(n/2)`` or ``ceil(n/2)`` members, in lexicographic order."""
    sizes = sorted({n_events // 2, (n_events + 1) // 2})
    return [c for size in sizes for c in combinations(range(n_events), size)]


def _candidate_accuracies(event_probs: np.ndarray, labels: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """Training accuracy of every class-0 mask (rows of ``masks``)."""
    totals = event_probs.sum(axis=1, keepdims=True)
    normalized = np.divide(event_probs, totals, out=np.zeros_like(event_probs), where=totals > 0)
    class0 = normalized @ masks.T  # (N, C)
    class1 = np.where(totals > 0, 1.0 - class0, 0.5)
    class0 = np.where(totals > 0, class0, 0.5)
    predicted = (class1 > class0).astype(np.int64)
    return (predicted == labels[:, None]).mean(axis=0)


def train_readout(
    distributions: Union[np.ndarray, torch.Tensor],
    labels: Sequence[int],
    m: int,
    k: int,
    strategy: Union[str, ReadoutStrategy] = ReadoutStrategy.CLUSTER,
) -> ReadoutSearchResult:
    """
    Pick the binning with the best training accuracy.

    Cluster strategy tries every class-0 set of half the collision-free events
    (both roundings); mode-group strategy tries every mode pair as the class-0
    group. Ties go to the earliest candidate.

    Args:
        distributions: Output distributions over the ``(m, k)`` basis, shape ``(N, D)``
        labels: True class per distribution
        m: Output modes
        k: Photons
        strategy: ``cluster`` or ``mode_group``

    Returns:
        The best binning with its training accuracy and the number of candidates
    """
    strategy = ReadoutStrategy(strategy)
    dists = distributions.detach().numpy() if isinstance(distributions, torch.Tensor) else np.asarray(distributions)
    labels = np.asarray(labels, dtype=np.int64)
    if dists.ndim != 2 or dists.shape[0] != len(labels):
        raise DimensionError("Need one output distribution per label")
    events = np.array(collision_free_configurations(m, k))
    event_probs = dists[:, events].astype(np.float64)

    if strategy is ReadoutStrategy.CLUSTER:
        candidates = cluster_candidates(len(events))
        masks = np.zeros((len(candidates), len(events)))
        for row, chosen in enumerate(candidates):
            masks[row, list(chosen)] = 1.0
        scores = _candidate_accuracies(event_probs, labels, masks)
        best = int(np.argmax(scores))
        binning = ReadoutBinning.cluster(m, k, candidates[best])
    else:
        candidates = list(combinations(range(m), 2))
        binnings = [ReadoutBinning.mode_group(m, pair, k) for pair in candidates]
        masks = np.array([[1.0 - label for label in b.labels] for b in binnings])
        scores = _candidate_accuracies(event_probs, labels, masks)
        best = int(np.argmax(scores))
        binning = binnings[best]

    logger.debug(f"{strategy.value} readout search: {len(candidates)} candidates, best accuracy {scores[best]:.3f}")
    return ReadoutSearchResult(binning, float(scores[best]), len(candidates))


@dataclass
class ReshuffledReadoutResult:
    """Readout search repeated over fresh train/test splits of one dataset."""

    strategy: ReadoutStrategy
    train_accuracies: List[float]
    test_accuracies: List[float]
    binnings: List[ReadoutBinning]

    @property
    def reshuffles(self) -> int:
        return len(self.train_accuracies)

    def to_dict(self) -> Dict:
        train, test = np.array(self.train_accuracies), np.array(self.test_accuracies)
        return {
            "reshuffles": self.reshuffles,
            "train_accuracy_mean": float(train.mean()),
            "train_accuracy_std": float(train.std()),
            "test_accuracy_mean": float(test.mean()),
            "test_accuracy_std": float(test.std()),
            "train_accuracies": self.train_accuracies,
            "test_accuracies": self.test_accuracies,
            "binnings": [b.to_dict() for b in self.binnings],
        }


def reshuffled_readout_search(
    distributions: Union[np.ndarray, torch.Tensor],
    labels: Sequence[int],
    train_n: int,
    test_n: int,
    m: int,
    k: int,
    strategy: Union[str, ReadoutStrategy] = ReadoutStrategy.MODE_GROUP,
    reshuffles: int = 30,
    seed: int = 0,
) -> ReshuffledReadoutResult:
    """
    Fit the readout on ``reshuffles`` random splits and score each on its test part.

    Split ``r`` permutes the samples with a generator seeded by ``seed + r``,
    then takes the first ``train_n`` for fitting and the next ``test_n`` for
    scoring.

    Raises:
        InsufficientSamplesError: If ``train_n + test_n`` exceeds the sample count
        ParameterError: If ``reshuffles`` is not positive
    """
    strategy = ReadoutStrategy(strategy)
    dists = distributions.detach().numpy() if isinstance(distributions, torch.Tensor) else np.asarray(distributions)
    labels = np.asarray(labels, dtype=np.int64)
    if dists.ndim != 2 or dists.shape[0] != len(labels):
        raise DimensionError("Need one output distribution per label")
    if reshuffles < 1:
        raise ParameterError(f"Need at least one reshuffle, got {reshuffles}")
    if train_n + test_n > len(labels):
        raise InsufficientSamplesError(f"Reshuffles need {train_n} + {test_n} samples, only {len(labels)} available")

    train_scores, test_scores, binnings = [], [], []
    for r in range(reshuffles):
        order = np.random.default_rng(seed + r).permutation(len(labels))
        train_idx, test_idx = order[:train_n], order[train_n:train_n + test_n]
        search = train_readout(dists[train_idx], labels[train_idx], m, k, strategy)
        train_scores.append(search.train_accuracy)
        test_scores.append(accuracy(readout(torch.as_tensor(dists[test_idx]), search.binning), labels[test_idx]))
        binnings.append(search.binning)

    result = ReshuffledReadoutResult(strategy, train_scores, test_scores, binnings)
    summary = result.to_dict()
    logger.debug(
        f"{strategy.value} readout over {reshuffles} reshuffles: "
        f"train {summary['train_accuracy_mean']:.3f} ± {summary['train_accuracy_std']:.3f}, "
        f"test {summary['test_accuracy_mean']:.3f} ± {summary['test_accuracy_std']:.3f}"
    )
    return result
