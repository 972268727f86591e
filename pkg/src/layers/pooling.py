"""State-injection pooling.

Each pooled register measures its odd-position modes (first, third, ...). A
photon detected in a measured mode is replaced by a fresh photon injected in
the following mode; when no photon is detected the register keeps its
amplitudes on the unmeasured modes. Measured modes are then dropped, so every
pooled register halves while still carrying exactly one photon.
"""

from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import product
from typing import List, Optional, Sequence, Tuple, Union

import torch

from src.errors import DimensionError, ShapeError
from src.fock.states import MixedState, PureState, register_block, tensor_basis_indices, tensor_weight
from src.layers.loader import RegisterLayout

TENSOR_TOL = 1e-10


@dataclass(frozen=True)
class PoolingSpec:
    """Measured modes and their injection targets, per register (global mode indices)."""

    layout: RegisterLayout
    measured: Tuple[Tuple[int, ...], ...]
    targets: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.measured) != self.layout.k or len(self.targets) != self.layout.k:
            raise DimensionError("Pooling spec needs one entry per register")
        for offset, d, measured, targets in zip(self.layout.offsets, self.layout.sizes, self.measured, self.targets):
            if not measured:
                if targets:
                    raise DimensionError("Injection targets given for an unpooled register")
                continue
            if len(measured) != d // 2 or d % 2:
                raise ShapeError(f"A pooled register of size {d} measures {d // 2} modes, got {len(measured)}")
            if len(set(measured)) != len(measured):
                raise DimensionError(f"Measured modes {measured} repeat a mode")
            if set(measured) & set(targets):
                raise DimensionError("Measured and target modes overlap")
            for a, b in zip(measured, targets):
                if b != a + 1 or not (offset <= a and b < offset + d):
                    raise DimensionError(f"Target {b} does not follow measured mode {a} inside its register")

    @classmethod
    def halving(cls, layout: RegisterLayout, pooled: Optional[Sequence[int]] = None) -> "PoolingSpec":
        """Measure every other mode of the selected registers (all by default)."""
        pooled = set(range(layout.k) if pooled is None else pooled)
        measured, targets = [], []
        for r, (offset, d) in enumerate(zip(layout.offsets, layout.sizes)):
            if r in pooled:
                if d % 2:
                    raise ShapeError(f"Cannot halve a register of odd size {d}")
                measured.append(tuple(offset + 2 * j for j in range(d // 2)))
                targets.append(tuple(offset + 2 * j + 1 for j in range(d // 2)))
            else:
                measured.append(())
                targets.append(())
        return cls(layout, tuple(measured), tuple(targets))

    @property
    def output_layout(self) -> RegisterLayout:
        return RegisterLayout(
            tuple(d // 2 if measured else d for d, measured in zip(self.layout.sizes, self.measured))
        )

    @property
    def surviving_modes(self) -> Tuple[int, ...]:
        dropped = {a for measured in self.measured for a in measured}
        return tuple(i for i in range(self.layout.m) if i not in dropped)


@dataclass(frozen=True)
class PoolingBranch:
    """One measurement record with its probability and conditional state."""

    outcome: Tuple[Optional[int], ...]  # detected measured mode per register, None when nothing clicked
    probability: float
    conditional_state: PureState


def _register_kraus(
    offset: int, d: int, measured: Tuple[int, ...], targets: Tuple[int, ...]
) -> List[Tuple[Optional[int], torch.Tensor]]:
    """
    Local Kraus operators (output x input single-photon register space).

    Output rows follow the surviving modes in ascending order, so each pair
    writes to the row of its own target whatever order the pairs are listed in.
    """
    if not measured:
        return [(None, torch.eye(d, dtype=torch.complex128))]
    dropped = {a - offset for a in measured}
    row_of = {mode: row for row, mode in enumerate(i for i in range(d) if i not in dropped)}
    half = d // 2
    keep = torch.zeros((half, d), dtype=torch.complex128)
    for b in targets:
        keep[row_of[b - offset], b - offset] = 1.0
    operators = [(None, keep)]
    for a, b in sorted(zip(measured, targets)):
        inject = torch.zeros((half, d), dtype=torch.complex128)
        inject[row_of[b - offset], a - offset] = 1.0
        operators.append((a, inject))
    return operators


@lru_cache(maxsize=32)
def pooling_kraus(spec: PoolingSpec) -> Tuple[Tuple[Tuple[Optional[int], ...], ...], torch.Tensor]:
    """
    Kraus operators of the pooling channel on the tensor-encoded subspace.

    Returns:
        ``(outcomes, operators)`` with ``operators`` of shape ``(B, T_out, T_in)``
        acting on row-major tensor coefficients
    """
    layout = spec.layout
    per_register = [
        _register_kraus(offset, d, measured, targets)
        for offset, d, measured, targets in zip(layout.offsets, layout.sizes, spec.measured, spec.targets)
    ]
    outcomes, operators = [], []
    for combination in product(*per_register):
        outcomes.append(tuple(outcome for outcome, _ in combination))
        operators.append(reduce(torch.kron, [op for _, op in combination]))
    return tuple(outcomes), torch.stack(operators)


def _embed(coefficients: torch.Tensor, layout: RegisterLayout) -> torch.Tensor:
    basis = layout.basis()
    indices = tensor_basis_indices(basis, layout.sizes)
    if coefficients.dim() == 1:
        return torch.zeros(len(basis), dtype=torch.complex128).index_put((indices,), coefficients)
    full = torch.zeros((len(basis), len(basis)), dtype=torch.complex128)
    return full.index_put((indices[:, None], indices[None, :]), coefficients)


def _check_input(state: Union[PureState, MixedState], spec: PoolingSpec) -> None:
    layout = spec.layout
    if state.basis.m != layout.m or state.basis.k != layout.k:
        raise DimensionError(
            f"State basis ({state.basis.m}, {state.basis.k}) does not match pooling layout {list(layout.sizes)}"
        )
    weight = tensor_weight(state, layout.sizes)
    if abs(weight - 1.0) > TENSOR_TOL:
        raise DimensionError(f"Pooling needs a tensor-encoded input; weight on one-photon-per-register states is {weight}")


def pooling_branches(state: PureState, spec: PoolingSpec) -> List[PoolingBranch]:
    """
    Enumerate the measurement outcomes with non-zero probability.

    Returns:
        Branches whose conditional states live on the output layout basis
    """
    _check_input(state, spec)
    coefficients = register_block(state, spec.layout.sizes)
    outcomes, operators = pooling_kraus(spec)
    out_layout = spec.output_layout
    out_basis = out_layout.basis()
    branches = []
    for outcome, operator in zip(outcomes, operators):
        projected = operator @ coefficients
        probability = float(projected.detach().abs().pow(2).sum())
        if probability <= 0.0:
            continue
        conditional = PureState(out_basis, _embed(projected / probability ** 0.5, out_layout))
        branches.append(PoolingBranch(outcome, probability, conditional))
    return branches


def pooling_channel(state: Union[PureState, MixedState], spec: PoolingSpec) -> MixedState:
    """
    Probability-weighted mixture of the pooling branches, ``sum_b K_b rho K_b^dagger``.

    Raises:
        DimensionError: If the state is not tensor-encoded over the pooling layout
    """
    _check_input(state, spec)
    _, operators = pooling_kraus(spec)
    block = register_block(state, spec.layout.sizes)
    if isinstance(state, PureState):
        projected = operators @ block
        rho = torch.einsum("bi,bj->ij", projected, projected.conj())
    else:
        rho = torch.einsum("bij,jk,blk->il", operators, block, operators.conj())
    out_layout = spec.output_layout
    return MixedState(out_layout.basis(), _embed(rho, out_layout))
