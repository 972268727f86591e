"""Pure and mixed states over a fixed photon-number subspace."""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Sequence, Tuple, Union

import numpy as np
import torch

from src.errors import DimensionError, NormalizationError
from src.fock.basis import SubspaceBasis, enumerate_basis

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-10
EIGEN_TOL = 1e-9

ArrayLike = Union[np.ndarray, torch.Tensor, Sequence[float]]


def as_complex(values: ArrayLike) -> torch.Tensor:
    """Convert to a complex128 tensor, keeping autograd history when present."""
    if isinstance(values, torch.Tensor):
        return values.to(torch.complex128)
    return torch.as_tensor(np.asarray(values), dtype=torch.complex128)


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over a basis."""

    basis: SubspaceBasis
    amplitudes: torch.Tensor

    def __post_init__(self):
        amplitudes = as_complex(self.amplitudes)
        if amplitudes.shape != (len(self.basis),):
            raise DimensionError(
                f"Amplitude vector of shape {tuple(amplitudes.shape)} does not match basis size {len(self.basis)}"
            )
        norm = float(amplitudes.detach().abs().pow(2).sum())
        if abs(norm - 1.0) > NORM_TOL:
            raise NormalizationError(f"State norm {norm} differs from 1")
        object.__setattr__(self, "amplitudes", amplitudes)

    def probabilities(self) -> torch.Tensor:
        return self.amplitudes.abs().pow(2)


@dataclass(frozen=True)
class MixedState:
    """Density operator over a basis."""

    basis: SubspaceBasis
    rho: torch.Tensor

    def __post_init__(self):
        rho = as_complex(self.rho)
        dim = len(self.basis)
        if rho.shape != (dim, dim):
            raise DimensionError(f"Density matrix of shape {tuple(rho.shape)} does not match basis size {dim}")
        plain = rho.detach()
        if float((plain - plain.conj().T).abs().max()) > HERMITIAN_TOL:
            raise NormalizationError("Density matrix is not Hermitian")
        trace = float(torch.diagonal(plain).real.sum())
        if abs(trace - 1.0) > NORM_TOL:
            raise NormalizationError(f"Density matrix trace {trace} differs from 1")
        hermitian = (plain + plain.conj().T) / 2
        smallest = float(torch.linalg.eigvalsh(hermitian).min())
        if smallest < -EIGEN_TOL:
            raise NormalizationError(f"Density matrix has negative eigenvalue {smallest}")
        object.__setattr__(self, "rho", rho)

    def probabilities(self) -> torch.Tensor:
        return torch.diagonal(self.rho).real


def register_offsets(registers: Sequence[int]) -> Tuple[int, ...]:
    """First mode of every register."""
    offsets, start = [], 0
    for d in registers:
        offsets.append(start)
        start += d
    return tuple(offsets)


def _check_layout(basis: SubspaceBasis, registers: Sequence[int]) -> None:
    if sum(registers) != basis.m or len(registers) != basis.k:
        raise DimensionError(
            f"Registers {list(registers)} do not partition the ({basis.m}, {basis.k}) basis "
            "with one photon per register"
        )


@lru_cache(maxsize=64)
def _tensor_indices(registers: Tuple[int, ...]) -> torch.Tensor:
    basis = enumerate_basis(sum(registers), len(registers))
    offsets = register_offsets(registers)
    positions = []
    for multi in product(*(range(d) for d in registers)):
        occupations = [0] * basis.m
        for offset, i in zip(offsets, multi):
            occupations[offset + i] = 1
        positions.append(basis.index_of(occupations))
    return torch.tensor(positions, dtype=torch.long)


def tensor_basis_indices(basis: SubspaceBasis, registers: Sequence[int]) -> torch.Tensor:
    """
    Basis positions of the one-photon-per-register states.

    Args:
        basis: Basis over ``sum(registers)`` modes with ``len(registers)`` photons
        registers: Register sizes

    Returns:
        Long tensor of length ``prod(registers)`` in row-major multi-index order
    """
    _check_layout(basis, registers)
    return _tensor_indices(tuple(int(d) for d in registers))


def tensor_encode(x: ArrayLike, basis: SubspaceBasis, registers: Sequence[int]) -> PureState:
    """
    Amplitude-encode a tensor on one photon per register.

    Args:
        x: Real tensor of shape ``registers``
        basis: Target basis
        registers: Register sizes

    Returns:
        PureState with amplitude ``x[i_1..i_k] / ||x||`` on the matching states
    """
    _check_layout(basis, registers)
    values = torch.as_tensor(np.asarray(x, dtype=np.float64)) if not isinstance(x, torch.Tensor) else x.to(torch.float64)
    if tuple(values.shape) != tuple(registers):
        raise DimensionError(f"Tensor of shape {tuple(values.shape)} does not match registers {list(registers)}")
    norm = torch.linalg.vector_norm(values)
    if float(norm) == 0.0:
        raise NormalizationError("Cannot encode an all-zero tensor")
    amplitudes = torch.zeros(len(basis), dtype=torch.complex128)
    amplitudes[tensor_basis_indices(basis, registers)] = (values.reshape(-1) / norm).to(torch.complex128)
    return PureState(basis, amplitudes)


def pure_to_mixed(psi: PureState) -> MixedState:
    """Density operator of a pure state."""
    return MixedState(psi.basis, torch.outer(psi.amplitudes, psi.amplitudes.conj()))


def register_block(state: Union[PureState, MixedState], registers: Sequence[int]) -> torch.Tensor:
    """
    Restriction of a state to the tensor-encoded subspace.

    Returns the coefficient vector for a pure state and the square block of the
    density operator for a mixed one, both in row-major multi-index order.
    """
    indices = tensor_basis_indices(state.basis, registers)
    if isinstance(state, PureState):
        return state.amplitudes[indices]
    return state.rho[indices][:, indices]


def tensor_weight(state: Union[PureState, MixedState], registers: Sequence[int]) -> float:
    """Probability mass on the one-photon-per-register states."""
    indices = tensor_basis_indices(state.basis, registers)
    return float(state.probabilities().detach()[indices].sum())
