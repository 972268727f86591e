"""Beam-splitter circuits, permanents and the k-photon lift."""

from src.optics.circuit import (
    Circuit,
    ModeUnitary,
    compact_six_mode_mesh,
    compose,
    compose_matrix,
    mesh_universal,
    with_random_phases,
)
from src.optics.gates import BeamSplitterGate, bs_matrix
from src.optics.lift import SubspaceUnitary, apply, evolve_fock, lift, lift_block
from src.optics.permanent import batched_permanent, permanent

__all__ = [
    "BeamSplitterGate",
    "Circuit",
    "ModeUnitary",
    "SubspaceUnitary",
    "apply",
    "batched_permanent",
    "bs_matrix",
    "compact_six_mode_mesh",
    "compose",
    "compose_matrix",
    "evolve_fock",
    "lift",
    "lift_block",
    "mesh_universal",
    "permanent",
    "with_random_phases",
]
