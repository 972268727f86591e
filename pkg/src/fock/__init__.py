"""Fock-basis combinatorics and state containers."""

from src.fock.basis import FockState, SubspaceBasis, basis_size, enumerate_basis
from src.fock.states import (
    MixedState,
    PureState,
    pure_to_mixed,
    register_block,
    register_offsets,
    tensor_basis_indices,
    tensor_encode,
)

__all__ = [
    "FockState",
    "SubspaceBasis",
    "basis_size",
    "enumerate_basis",
    "MixedState",
    "PureState",
    "pure_to_mixed",
    "register_block",
    "register_offsets",
    "tensor_basis_indices",
    "tensor_encode",
]
