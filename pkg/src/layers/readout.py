"""Readout binning of collision-free detection events into two classes."""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, Optional, Tuple

import torch

from src.errors import DimensionError, ReadoutError
from src.fock.basis import enumerate_basis


class ReadoutStrategy(str, Enum):
    """How detection events are grouped into classes."""
    CLUSTER = "cluster"
    MODE_GROUP = "mode_group"


@lru_cache(maxsize=32)
def collision_free_configurations(m: int, k: int) -> Tuple[int, ...]:
    """Basis positions of the events with at most one photon per mode, in basis order."""
    basis = enumerate_basis(m, k)
    return tuple(i for i, s in enumerate(basis.states) if s.is_collision_free())


@dataclass(frozen=True)
class ReadoutBinning:
    """Label of every collision-free event of a ``(m, k)`` output basis."""

    strategy: ReadoutStrategy
    m: int
    k: int
    events: Tuple[int, ...]
    labels: Tuple[int, ...]
    group: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if len(self.events) != len(self.labels):
            raise DimensionError("Every event needs exactly one label")
        if set(self.events) != set(collision_free_configurations(self.m, self.k)):
            raise DimensionError("Binning must label every collision-free configuration exactly once")
        if any(label not in (0, 1) for label in self.labels):
            raise ReadoutError(f"Labels must be 0 or 1, got {sorted(set(self.labels))}")
        for label in (0, 1):
            if label not in self.labels:
                raise ReadoutError(f"Class {label} has no detection event")

    @classmethod
    def cluster(cls, m: int, k: int, label0: Iterable[int]) -> "ReadoutBinning":
        """
        Assign the given events (indices into the collision-free list) to class 0.

        Every other collision-free event goes to class 1.
        """
        events = collision_free_configurations(m, k)
        chosen = set(label0)
        if any(not 0 <= i < len(events) for i in chosen):
            raise DimensionError(f"Event index out of range for {len(events)} events")
        labels = tuple(0 if i in chosen else 1 for i in range(len(events)))
        return cls(ReadoutStrategy.CLUSTER, m, k, events, labels)

    @classmethod
    def mode_group(cls, m: int, group: Iterable[int], k: int = 2) -> "ReadoutBinning":
        """Class 0 when at least one photon lands in ``group``, class 1 otherwise."""
        group = tuple(sorted(set(group)))
        if any(not 0 <= mode < m for mode in group):
            raise DimensionError(f"Mode group {group} exceeds {m} modes")
        basis = enumerate_basis(m, k)
        events = collision_free_configurations(m, k)
        labels = tuple(
            0 if any(basis[i].occupations[mode] for mode in group) else 1
            for i in events
        )
        return cls(ReadoutStrategy.MODE_GROUP, m, k, events, labels, group)

    @classmethod
    def canonical(cls, m: int, k: int) -> "ReadoutBinning":
        """Mode-group binning with the first half of the modes as the class-0 group."""
        return cls.mode_group(m, range(m // 2), k)

    @classmethod
    def default(cls, strategy: ReadoutStrategy, m: int, k: int) -> "ReadoutBinning":
        """Starting binning of a strategy: canonical mode group, or the first half of the events."""
        if ReadoutStrategy(strategy) is ReadoutStrategy.MODE_GROUP:
            return cls.canonical(m, k)
        return cls.cluster(m, k, range(len(collision_free_configurations(m, k)) // 2))

    def matrix(self) -> torch.Tensor:
        """``(D, 2)`` indicator matrix from basis positions to classes."""
        size = len(enumerate_basis(self.m, self.k))
        indicator = torch.zeros((size, 2), dtype=torch.float64)
        for event, label in zip(self.events, self.labels):
            indicator[event, label] = 1.0
        return indicator

    def to_dict(self) -> Dict:
        return {
            "strategy": self.strategy.value,
            "m": self.m,
            "k": self.k,
            "label0_events": [i for i, label in enumerate(self.labels) if label == 0],
            "group": list(self.group) if self.group is not None else None,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ReadoutBinning":
        strategy = ReadoutStrategy(data["strategy"])
        if strategy is ReadoutStrategy.MODE_GROUP:
            return cls.mode_group(data["m"], data["group"], data["k"])
        return cls.cluster(data["m"], data["k"], data["label0_events"])


def readout(dist: torch.Tensor, binning: ReadoutBinning) -> torch.Tensor:
    """
    Class probabilities from an output distribution.

    Bunched events are discarded and the rest renormalized; when no mass falls
    on a collision-free event both classes get 1/2.

    Args:
        dist: Probabilities over the output basis, shape ``(..., D)``
        binning: Event labels

    Returns:
        Tensor of shape ``(..., 2)``
    """
    indicator = binning.matrix()
    if dist.shape[-1] != indicator.shape[0]:
        raise DimensionError(f"Distribution of length {dist.shape[-1]} does not match basis size {indicator.shape[0]}")
    return bin_probabilities(dist, indicator)


def bin_probabilities(dist: torch.Tensor, indicator: torch.Tensor) -> torch.Tensor:
    """Renormalized class mass of ``dist`` under a ``(D, 2)`` indicator matrix."""
    classes = dist.to(torch.float64) @ indicator
    total = classes.sum(dim=-1, keepdim=True)
    uniform = torch.full_like(classes, 0.5)
    safe_total = torch.where(total > 0, total, torch.ones_like(total))
    return torch.where(total > 0, classes / safe_total, uniform)
