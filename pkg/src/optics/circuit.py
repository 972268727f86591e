"""Beam-splitter circuits and their composition into mode unitaries."""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
import torch

from src.errors import DimensionError, ParameterError
from src.optics.gates import BeamSplitterGate, bs_matrix

UNITARY_TOL = 1e-10

# Mode pairs of the eight-gate, six-mode dense layout of the experimental chip
COMPACT_SIX_MODE_PAIRS: Tuple[Tuple[int, int], ...] = (
    (2, 3), (1, 2), (3, 4), (0, 1), (2, 3), (4, 5), (1, 2), (3, 4),
)

Params = Union[torch.Tensor, np.ndarray, Sequence[float], None]


@dataclass(frozen=True)
class Circuit:
    """Ordered beam-splitter placements over ``m`` modes."""

    m: int
    gates: Tuple[BeamSplitterGate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        gates = tuple(self.gates)
        if self.m < 1:
            raise DimensionError(f"Circuit needs at least one mode, got {self.m}")
        for gate in gates:
            if max(gate.modes) >= self.m:
                raise DimensionError(f"Gate on modes {gate.modes} exceeds circuit width {self.m}")
        slots = {g.slot for g in gates if g.slot is not None}
        if slots and slots != set(range(max(slots) + 1)):
            missing = sorted(set(range(max(slots) + 1)) - slots)
            raise ParameterError(f"Parameter slots {missing} are never referenced")
        object.__setattr__(self, "gates", gates)

    @property
    def n_params(self) -> int:
        slots = [g.slot for g in self.gates if g.slot is not None]
        return max(slots) + 1 if slots else 0

    @property
    def param_bindings(self) -> Dict[int, int]:
        """Gate position to parameter slot, for trainable gates."""
        return {i: g.slot for i, g in enumerate(self.gates) if g.slot is not None}

    def __len__(self) -> int:
        return len(self.gates)

    @property
    def depth(self) -> int:
        """Number of beam-splitter columns when every gate is placed as early as its modes allow."""
        reached = [0] * self.m
        for gate in self.gates:
            a, b = gate.modes
            reached[a] = reached[b] = max(reached[a], reached[b]) + 1
        return max(reached, default=0)

    def embedded(self, m: int, offset: int = 0, slot_offset: int = 0) -> "Circuit":
        """This circuit placed on modes ``offset..offset+self.m-1`` of an ``m``-mode circuit."""
        if offset < 0 or offset + self.m > m:
            raise DimensionError(f"Cannot place a {self.m}-mode circuit at offset {offset} in {m} modes")
        return Circuit(m, tuple(g.shifted(offset, slot_offset) for g in self.gates))

    def with_phases(self, phases: Sequence[float]) -> "Circuit":
        """Copy with the given phase on every trainable gate, in gate order."""
        trainable = [i for i, g in enumerate(self.gates) if g.trainable]
        if len(phases) != len(trainable):
            raise ParameterError(f"Expected {len(trainable)} phases, got {len(phases)}")
        gates = list(self.gates)
        for i, phi in zip(trainable, phases):
            g = gates[i]
            gates[i] = BeamSplitterGate(g.modes, theta=g.theta, phi=float(phi), slot=g.slot)
        return Circuit(self.m, tuple(gates))

    def to_dict(self) -> Dict:
        return {
            "m": self.m,
            "gates": [
                {"modes": list(g.modes), "theta": g.theta, "phi": g.phi, "slot": g.slot}
                for g in self.gates
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "Circuit":
        gates = tuple(
            BeamSplitterGate(tuple(g["modes"]), theta=g.get("theta", 0.0), phi=g.get("phi", 0.0), slot=g.get("slot"))
            for g in data.get("gates", [])
        )
        return cls(int(data["m"]), gates)


@dataclass(frozen=True)
class ModeUnitary:
    """Single-photon (``m`` x ``m``) unitary of a circuit."""

    m: int
    matrix: torch.Tensor

    def __post_init__(self):
        if self.matrix.shape != (self.m, self.m):
            raise DimensionError(f"Expected a {self.m}x{self.m} matrix, got {tuple(self.matrix.shape)}")
        plain = self.matrix.detach()
        error = (plain.conj().T @ plain - torch.eye(self.m, dtype=plain.dtype)).abs().max()
        if float(error) > UNITARY_TOL:
            raise ParameterError(f"Mode matrix deviates from unitarity by {float(error):.3e}")

    @classmethod
    def identity(cls, m: int) -> "ModeUnitary":
        return cls(m, torch.eye(m, dtype=torch.complex128))

    def __matmul__(self, other: "ModeUnitary") -> "ModeUnitary":
        if other.m != self.m:
            raise DimensionError(f"Cannot multiply {self.m}- and {other.m}-mode unitaries")
        return ModeUnitary(self.m, self.matrix @ other.matrix)


def _as_params(params: Params, needed: int) -> torch.Tensor:
    if needed == 0:
        return torch.zeros(0, dtype=torch.float64)
    if params is None:
        raise ParameterError(f"Circuit has {needed} parameter slots but no parameters were given")
    if isinstance(params, torch.Tensor):
        vector = params.to(torch.float64).reshape(-1)
    else:
        vector = torch.as_tensor(np.asarray(params, dtype=np.float64).reshape(-1))
    if vector.numel() < needed:
        raise ParameterError(f"Circuit needs {needed} parameters, got {vector.numel()}")
    if not bool(torch.isfinite(vector.detach()).all()):
        raise ParameterError("Non-finite circuit parameter")
    return vector


def compose_matrix(circuit: Circuit, params: Params = None) -> torch.Tensor:
    """Raw ``m`` x ``m`` product of the embedded gates (later gates on the left)."""
    vector = _as_params(params, circuit.n_params)
    m = circuit.m
    unitary = torch.eye(m, dtype=torch.complex128)
    for gate in circuit.gates:
        theta = vector[gate.slot] if gate.slot is not None else gate.theta
        block = bs_matrix(theta, gate.phi)
        a, b = gate.modes
        rows = torch.tensor([a, a, b, b])
        cols = torch.tensor([a, b, a, b])
        embedding = torch.eye(m, dtype=torch.complex128).index_put((rows, cols), block.reshape(-1))
        unitary = embedding @ unitary
    return unitary


def compose(circuit: Circuit, params: Params = None) -> ModeUnitary:
    """
    Multiply the embedded 2x2 blocks of a circuit in application order.

    Args:
        circuit: Circuit to compose
        params: Flat parameter vector covering every slot

    Returns:
        ModeUnitary with ``psi_out = U psi_in`` for a single photon

    Raises:
        ParameterError: If a slot is unbound or an angle is not finite
    """
    return ModeUnitary(circuit.m, compose_matrix(circuit, params))


def mesh_universal(m: int, slot_offset: int = 0) -> Circuit:
    """
    Rectangular mesh of ``m`` alternating nearest-neighbour layers.

    Layer ``l`` couples modes ``(i, i+1)`` for ``i = l % 2, l % 2 + 2, ...``;
    the mesh holds ``m(m-1)/2`` independently parameterized gates.
    """
    if m < 2:
        raise DimensionError(f"A mesh needs at least two modes, got {m}")
    gates = []
    for layer in range(m):
        for i in range(layer % 2, m - 1, 2):
            gates.append(BeamSplitterGate((i, i + 1), slot=slot_offset + len(gates)))
    return Circuit(m, tuple(gates))


def compact_six_mode_mesh() -> Circuit:
    """Eight independently parameterized gates over six modes."""
    return Circuit(6, tuple(BeamSplitterGate(pair, slot=i) for i, pair in enumerate(COMPACT_SIX_MODE_PAIRS)))


def with_random_phases(circuit: Circuit, generator: Optional[torch.Generator] = None) -> Circuit:
    """Freeze a uniform random phase in [0, 2pi) on every trainable gate."""
    count = sum(1 for g in circuit.gates if g.trainable)
    phases = torch.rand(count, generator=generator, dtype=torch.float64) * (2 * math.pi)
    return circuit.with_phases(phases.tolist())
