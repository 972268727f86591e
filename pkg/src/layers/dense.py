"""Dense layer on the pooled photons plus vacuum padding."""

from functools import lru_cache

import torch

from src.errors import DimensionError
from src.fock.basis import enumerate_basis
from src.fock.states import MixedState
from src.optics.circuit import Circuit, compose
from src.optics.lift import apply, lift


def padding_offset(alpha: int) -> int:
    """Vacuum modes placed before the pooled modes (the rest go after)."""
    return alpha // 2


@lru_cache(maxsize=64)
def embedding_indices(m_small: int, k: int, m_big: int, offset: int) -> torch.Tensor:
    """Position in the ``(m_big, k)`` basis of every ``(m_small, k)`` state shifted by ``offset`` modes."""
    if offset < 0 or offset + m_small > m_big:
        raise DimensionError(f"Cannot pad {m_small} modes into {m_big} at offset {offset}")
    small = enumerate_basis(m_small, k)
    big = enumerate_basis(m_big, k)
    after = m_big - m_small - offset
    return torch.tensor(
        [big.index_of((0,) * offset + s.occupations + (0,) * after) for s in small.states],
        dtype=torch.long,
    )


def pad_state(rho: MixedState, alpha: int) -> MixedState:
    """Embed a state into ``alpha`` extra vacuum modes, centered."""
    m, k = rho.basis.m, rho.basis.k
    big = enumerate_basis(m + alpha, k)
    indices = embedding_indices(m, k, m + alpha, padding_offset(alpha))
    padded = torch.zeros((len(big), len(big)), dtype=torch.complex128)
    padded = padded.index_put((indices[:, None], indices[None, :]), rho.rho)
    return MixedState(big, padded)


def dense_layer(rho: MixedState, circuit: Circuit, params, alpha: int) -> MixedState:
    """
    Pad with ``alpha`` vacuum modes and conjugate by the lifted dense unitary.

    Raises:
        DimensionError: If the circuit does not span ``m + alpha`` modes
    """
    if alpha < 0:
        raise DimensionError(f"Negative extra-mode count {alpha}")
    if circuit.m != rho.basis.m + alpha:
        raise DimensionError(
            f"Dense circuit spans {circuit.m} modes, expected {rho.basis.m} + {alpha}"
        )
    padded = pad_state(rho, alpha) if alpha else rho
    return apply(lift(compose(circuit, params), rho.basis.k), padded)


def measure_distribution(rho: MixedState) -> torch.Tensor:
    """Photon-counting distribution: the Fock-basis diagonal."""
    return torch.diagonal(rho.rho).real
