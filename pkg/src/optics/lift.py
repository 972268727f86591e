"""Lift of mode unitaries to the k-photon subspace."""

from dataclasses import dataclass
from functools import lru_cache
from math import sqrt
from typing import Optional, Sequence, Tuple, Union

import torch

from src.config.settings import settings
from src.errors import DimensionError, NormalizationError
from src.fock.basis import SubspaceBasis, enumerate_basis
from src.fock.states import MixedState, PureState
from src.optics.circuit import ModeUnitary
from src.optics.permanent import batched_permanent

SUBSPACE_UNITARY_TOL = 1e-8


@dataclass(frozen=True)
class SubspaceUnitary:
    """Unitary acting on a fixed photon-number basis."""

    basis: SubspaceBasis
    matrix: torch.Tensor

    def __post_init__(self):
        dim = len(self.basis)
        if self.matrix.shape != (dim, dim):
            raise DimensionError(f"Expected a {dim}x{dim} matrix, got {tuple(self.matrix.shape)}")
        plain = self.matrix.detach()
        error = float((plain @ plain.conj().T - torch.eye(dim, dtype=plain.dtype)).abs().max())
        if error > SUBSPACE_UNITARY_TOL:
            raise NormalizationError(f"Lifted matrix deviates from unitarity by {error:.3e}")

    def __matmul__(self, other: "SubspaceUnitary") -> "SubspaceUnitary":
        if other.basis != self.basis:
            raise DimensionError("Cannot multiply unitaries over different bases")
        return SubspaceUnitary(self.basis, self.matrix @ other.matrix)


@lru_cache(maxsize=64)
def photon_table(m: int, k: int) -> Tuple[torch.Tensor, torch.Tensor]:
    """
    Per basis state: the mode of every photon and ``sqrt(prod n_i!)``.

    Returns:
        ``(modes, norms)`` with shapes ``(D, k)`` and ``(D,)``
    """
    basis = enumerate_basis(m, k)
    modes = torch.tensor([s.photon_modes() for s in basis.states], dtype=torch.long).reshape(len(basis), k)
    norms = torch.tensor([sqrt(s.norm_factor()) for s in basis.states], dtype=torch.float64)
    return modes, norms


def _matrix(unitary: Union[ModeUnitary, torch.Tensor]) -> torch.Tensor:
    return unitary.matrix if isinstance(unitary, ModeUnitary) else unitary


def lift_block(
    unitary: Union[ModeUnitary, torch.Tensor],
    k: int,
    rows: Optional[torch.Tensor] = None,
    cols: Optional[torch.Tensor] = None,
) -> torch.Tensor:
    """
    Selected entries of the lifted matrix.

    Entry ``(S, T)`` is ``Per(U[S, T]) / sqrt(prod s_i! prod t_j!)`` where ``U[S, T]``
    repeats row ``i`` ``s_i`` times and column ``j`` ``t_j`` times.

    Args:
        unitary: Mode unitary or raw ``m`` x ``m`` matrix
        k: Photon count
        rows: Output-state positions (all when omitted)
        cols: Input-state positions (all when omitted)

    Returns:
        Complex tensor of shape ``(len(rows), len(cols))``
    """
    matrix = _matrix(unitary)
    m = matrix.shape[-1]
    enumerate_basis(m, k)  # capacity check
    modes, norms = photon_table(m, k)
    if rows is None:
        rows = torch.arange(len(modes))
    if cols is None:
        cols = torch.arange(len(modes))
    col_modes = modes[cols]
    col_norms = norms[cols]

    blocks = []
    for start in range(0, len(rows), settings.lift_row_chunk):
        chunk = rows[start:start + settings.lift_row_chunk]
        row_modes = modes[chunk]
        sub = matrix[row_modes[:, None, :, None], col_modes[None, :, None, :]]
        scale = (norms[chunk][:, None] * col_norms[None, :]).to(torch.complex128)
        blocks.append(batched_permanent(sub) / scale)
    if not blocks:
        return torch.zeros((0, len(cols)), dtype=torch.complex128)
    return torch.cat(blocks, dim=0)


def lift(unitary: ModeUnitary, k: int) -> SubspaceUnitary:
    """
    Unitary induced on the ``k``-photon subspace.

    Raises:
        CapacityError: If the subspace exceeds the configured cap
    """
    basis = enumerate_basis(unitary.m, k)
    return SubspaceUnitary(basis, lift_block(unitary, k))


def evolve_fock(unitary: Union[ModeUnitary, torch.Tensor], occupations: Sequence[int]) -> PureState:
    """Output state for a single Fock input (one column of the lift)."""
    matrix = _matrix(unitary)
    k = sum(occupations)
    basis = enumerate_basis(matrix.shape[-1], k)
    column = torch.tensor([basis.index_of(occupations)])
    return PureState(basis, lift_block(matrix, k, cols=column)[:, 0])


def apply(unitary: SubspaceUnitary, state: Union[PureState, MixedState]) -> Union[PureState, MixedState]:
    """
    Evolve a state: ``psi -> U psi`` or ``rho -> U rho U^dagger``.

    Raises:
        DimensionError: If the state lives on another basis
    """
    if state.basis != unitary.basis:
        raise DimensionError(
            f"State basis ({state.basis.m}, {state.basis.k}) does not match "
            f"unitary basis ({unitary.basis.m}, {unitary.basis.k})"
        )
    if isinstance(state, PureState):
        return PureState(state.basis, unitary.matrix @ state.amplitudes)
    return MixedState(state.basis, unitary.matrix @ state.rho @ unitary.matrix.conj().T)
