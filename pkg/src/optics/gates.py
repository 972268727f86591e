"""Two-mode beam-splitter gates."""

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import torch

from src.errors import DimensionError, ParameterError

Angle = Union[float, torch.Tensor]


def bs_matrix(theta: Angle, phi: Angle = 0.0) -> torch.Tensor:
    """
    Beam-splitter block ``[[cos t, e^{i p} sin t], [-e^{-i p} sin t, cos t]]``.

    Args:
        theta: Mixing angle in radians (transmittance cos^2 theta)
        phi: Phase in radians

    Returns:
        2x2 complex128 tensor, differentiable in both angles
    """
    theta = torch.as_tensor(theta, dtype=torch.float64)
    phi = torch.as_tensor(phi, dtype=torch.float64)
    cos = torch.cos(theta).to(torch.complex128)
    sin = torch.sin(theta).to(torch.complex128)
    phase = torch.exp(1j * phi)
    return torch.stack(
        [
            torch.stack([cos, phase * sin]),
            torch.stack([-phase.conj() * sin, cos]),
        ]
    )


@dataclass(frozen=True)
class BeamSplitterGate:
    """
    Beam splitter on an ordered mode pair.

    A gate with ``slot`` set takes its angle from the shared parameter vector;
    otherwise ``theta`` is a literal. Gates sharing a slot are tied.
    """

    modes: Tuple[int, int]
    theta: float = 0.0
    phi: float = 0.0
    slot: Optional[int] = None

    def __post_init__(self):
        if len(self.modes) != 2:
            raise DimensionError(f"A beam splitter acts on two modes, got {self.modes}")
        a, b = (int(x) for x in self.modes)
        if a == b or a < 0 or b < 0:
            raise DimensionError(f"Invalid mode pair {self.modes}")
        if self.slot is not None and self.slot < 0:
            raise ParameterError(f"Negative parameter slot {self.slot}")
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ParameterError(f"Non-finite literal angle on gate {self.modes}")
        object.__setattr__(self, "modes", (a, b))

    @property
    def trainable(self) -> bool:
        return self.slot is not None

    def shifted(self, offset: int, slot_offset: int = 0) -> "BeamSplitterGate":
        """Same gate moved by ``offset`` modes and ``slot_offset`` slots."""
        return BeamSplitterGate(
            modes=(self.modes[0] + offset, self.modes[1] + offset),
            theta=self.theta,
            phi=self.phi,
            slot=None if self.slot is None else self.slot + slot_offset,
        )
