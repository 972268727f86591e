"""Convolutional layer: one tied K-mode filter per register."""

from typing import Union

import numpy as np
import torch

from src.errors import DimensionError, ShapeError
from src.fock.states import PureState
from src.layers.loader import RegisterLayout
from src.optics.circuit import Circuit, compose, mesh_universal
from src.optics.lift import apply, lift


def filter_params(kernel_size: int) -> int:
    """Angles of one K-mode universal filter."""
    return kernel_size * (kernel_size - 1) // 2


def conv_circuit(layout: RegisterLayout, kernel_size: int) -> Circuit:
    """
    Filter circuit over the whole layout.

    The same ``kernel_size``-mode mesh is placed on every consecutive window of
    every register. Windows of one register share their slots; each register
    owns its own block of ``K(K-1)/2`` slots, in register order.

    Raises:
        ShapeError: If ``kernel_size`` does not divide a register size
    """
    if kernel_size < 2:
        raise ShapeError(f"Filter size must be at least 2, got {kernel_size}")
    for d in layout.sizes:
        if d % kernel_size:
            raise ShapeError(f"Filter size {kernel_size} does not divide register size {d}")
    window = mesh_universal(kernel_size)
    per_register = window.n_params
    gates = []
    for r, (offset, d) in enumerate(zip(layout.offsets, layout.sizes)):
        for start in range(offset, offset + d, kernel_size):
            gates.extend(window.embedded(layout.m, start, slot_offset=r * per_register).gates)
    return Circuit(layout.m, tuple(gates))


def conv_layer(
    state: PureState,
    kernel_size: int,
    theta: Union[torch.Tensor, np.ndarray, list],
    layout: RegisterLayout,
) -> PureState:
    """
    Apply the tied filters to a tensor-encoded state.

    Args:
        state: State over the layout basis
        kernel_size: Filter size ``K``
        theta: ``K(K-1)/2`` angles per register, register-major (flat or ``(k, K(K-1)/2)``)
        layout: Register layout

    Returns:
        The filtered state, still tensor-encoded
    """
    if state.basis.m != layout.m or state.basis.k != layout.k:
        raise DimensionError("State basis does not match the register layout")
    circuit = conv_circuit(layout, kernel_size)
    params = theta.reshape(-1) if isinstance(theta, torch.Tensor) else np.asarray(theta, dtype=np.float64).reshape(-1)
    if len(params) != circuit.n_params:
        raise DimensionError(f"Expected {circuit.n_params} filter angles, got {len(params)}")
    return apply(lift(compose(circuit, params), layout.k), state)
