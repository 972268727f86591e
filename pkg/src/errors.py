"""Exception hierarchy for the PQCNN simulator and harness."""

from pathlib import Path
from typing import Optional, Union


class PQCNNError(Exception):
    """Base class for every error raised by this package."""

    exit_code: int = 1


class SimulationError(PQCNNError, ValueError):
    """Inconsistent input to a simulator operation."""

    exit_code = 2


class CapacityError(SimulationError):
    """Requested Fock subspace exceeds the configured capacity cap."""


class DimensionError(SimulationError):
    """Mode counts, bases or shapes do not agree."""


class NormalizationError(SimulationError):
    """A state cannot be normalized (zero vector, zero image)."""


class ParameterError(SimulationError):
    """A circuit parameter slot is unbound or an angle is not finite."""


class RankError(SimulationError):
    """Image is not rank-1 and cannot be loaded by a separable loader."""


class ShapeError(SimulationError):
    """Filter size does not partition a register."""


class ReadoutError(SimulationError):
    """A readout binning leaves some class without any event."""


class ConfigError(PQCNNError):
    """Experiment configuration is invalid or inconsistent."""

    exit_code = 2


class DataError(PQCNNError):
    """Dataset cannot be produced or ingested."""

    exit_code = 3


class ParseError(DataError):
    """Malformed row in a dataset file."""

    def __init__(self, message: str, path: Union[str, Path, None] = None, line: Optional[int] = None):
        self.path = str(path) if path is not None else None
        self.line = line
        location = ""
        if self.path is not None:
            location = f"{self.path}:{line}: " if line is not None else f"{self.path}: "
        super().__init__(f"{location}{message}")


class EmptyClassError(DataError):
    """A configured class has no samples."""


class InsufficientSamplesError(DataError):
    """Not enough samples for the requested split."""


class NumericalError(PQCNNError):
    """Training produced a non-finite loss or parameter."""

    exit_code = 4
