"""Register layout and the separable quantum data loader."""

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import torch

from src.errors import DimensionError, NormalizationError, RankError
from src.fock.basis import SubspaceBasis, enumerate_basis
from src.fock.states import PureState, register_block, register_offsets
from src.optics.circuit import Circuit, compose_matrix
from src.optics.gates import BeamSplitterGate
from src.optics.lift import evolve_fock

# Relative size of the second singular value below which an image counts as rank-1
RANK_TOL = 1e-10


@dataclass(frozen=True)
class RegisterLayout:
    """Register sizes ``d_1..d_k``; each register carries one photon."""

    sizes: Tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(d) for d in self.sizes)
        if not sizes:
            raise DimensionError("A layout needs at least one register")
        if any(d < 2 for d in sizes):
            raise DimensionError(f"Every register needs at least two modes, got {list(sizes)}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def m(self) -> int:
        return sum(self.sizes)

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def offsets(self) -> Tuple[int, ...]:
        return register_offsets(self.sizes)

    @property
    def tensor_size(self) -> int:
        return math.prod(self.sizes)

    def basis(self) -> SubspaceBasis:
        return enumerate_basis(self.m, self.k)

    def first_modes_input(self) -> Tuple[int, ...]:
        """Occupations with the photon of every register in its first mode."""
        occupations = [0] * self.m
        for offset in self.offsets:
            occupations[offset] = 1
        return tuple(occupations)


def qdl_loader_angles(v: Sequence[float]) -> List[float]:
    """
    Beam-splitter angles of a single-photon loader cascade.

    Gate ``j`` couples modes ``j`` and ``j+1``; with the photon injected in the
    first mode the cascade outputs the amplitudes ``v / ||v||`` exactly.

    Raises:
        NormalizationError: For a zero vector
    """
    v = np.asarray(v, dtype=np.float64).reshape(-1)
    if v.size < 2:
        raise DimensionError(f"A loader needs at least two modes, got {v.size}")
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise NormalizationError("Cannot load a zero vector")
    u = v / norm
    d = u.size
    angles = []
    for j in range(d - 2):
        angles.append(-math.atan2(float(np.linalg.norm(u[j + 1:])), float(u[j])))
    angles.append(-math.atan2(float(u[d - 1]), float(u[d - 2])))
    return angles


def loader_circuit(angles: Sequence[float], m: int, offset: int = 0) -> Circuit:
    """Fixed-angle cascade on modes ``offset..offset+len(angles)``."""
    gates = tuple(
        BeamSplitterGate((offset + j, offset + j + 1), theta=float(theta))
        for j, theta in enumerate(angles)
    )
    return Circuit(m, gates)


def cascade_amplitudes(angles: Sequence[float]) -> np.ndarray:
    """Single-photon amplitudes produced by a loader cascade."""
    d = len(angles) + 1
    matrix = compose_matrix(loader_circuit(angles, d))
    return matrix[:, 0].real.numpy().copy()


def rank1_factors(image: np.ndarray, nearest_rank1: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """
    Row and column factors ``u, v`` with ``image`` proportional to ``u v^T``.

    Raises:
        NormalizationError: For an all-zero image
        RankError: For a non-rank-1 image unless ``nearest_rank1`` is set
    """
    image = np.asarray(image, dtype=np.float64)
    if not np.any(image):
        raise NormalizationError("Cannot load an all-zero image")
    left, singular, right = np.linalg.svd(image)
    if len(singular) > 1 and singular[1] > RANK_TOL * singular[0] and not nearest_rank1:
        raise RankError(
            f"Image has rank > 1 (second singular value {singular[1]:.3e}); "
            "enable nearest_rank1 to load its best rank-1 approximation"
        )
    return left[:, 0], right[0]


def qdl_circuit(image, layout: RegisterLayout, nearest_rank1: bool = False) -> Circuit:
    """Loader circuit of an image: one cascade per register."""
    image = np.asarray(image, dtype=np.float64)
    if tuple(image.shape) != layout.sizes:
        raise DimensionError(f"Image of shape {image.shape} does not match registers {list(layout.sizes)}")
    if layout.k == 1:
        factors = [image]
    elif layout.k == 2:
        factors = list(rank1_factors(image, nearest_rank1))
    else:
        raise DimensionError(f"The separable loader handles one or two registers, got {layout.k}")
    gates = []
    for factor, offset in zip(factors, layout.offsets):
        gates.extend(loader_circuit(qdl_loader_angles(factor), layout.m, offset).gates)
    return Circuit(layout.m, tuple(gates))


def qdl_encode(image, layout: RegisterLayout, nearest_rank1: bool = False) -> PureState:
    """
    Load an image with per-register cascades.

    Args:
        image: ``d1`` x ``d2`` real array (or a vector for a single register)
        layout: Register layout matching the image shape
        nearest_rank1: Load the best rank-1 approximation of non-rank-1 images

    Returns:
        Tensor-encoded PureState over the layout basis
    """
    circuit = qdl_circuit(image, layout, nearest_rank1)
    return evolve_fock(compose_matrix(circuit), layout.first_modes_input())


def encode_batch(images, layout: RegisterLayout, nearest_rank1: bool = False) -> torch.Tensor:
    """Tensor coefficients (row-major) of every image, shape ``(N, prod(sizes))``."""
    rows = [register_block(qdl_encode(image, layout, nearest_rank1), layout.sizes) for image in images]
    if not rows:
        return torch.zeros((0, layout.tensor_size), dtype=torch.complex128)
    return torch.stack(rows)
