"""Base command class for configuration-driven runs."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

from rich.console import Console
from rich.table import Table

from src.config.experiment import ExperimentConfig
from src.errors import ConfigError
from src.training.model import ParamAccounting, ResourceAccounting, build_model
from src.utils.helpers import save_to_json
from src.utils.logger import LoggerMixin

console = Console(stderr=True)


class CommandStatus(Enum):
    """Command execution status."""
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class CommandResult:
    """Result from command execution."""
    command: str
    status: CommandStatus
    artifacts: Dict[str, str] = field(default_factory=dict)
    data: Optional[Any] = None
    error: Optional[str] = None
    started_at: Optional[datetime] = None
    completed_at: Optional[datetime] = None

    @property
    def execution_time(self) -> Optional[float]:
        """Calculate execution time in seconds."""
        if self.started_at and self.completed_at:
            return (self.completed_at - self.started_at).total_seconds()
        return None


class BaseCommand(ABC, LoggerMixin):
    """Abstract base class for all commands."""

    name = "command"

    def __init__(self, config: ExperimentConfig, out_dir: Optional[Path] = None):
        """
        Initialize base command.

        Args:
            config: Validated experiment config
            out_dir: Output directory (defaults to the config's)
        """
        self.config = config
        self.out_dir = Path(out_dir) if out_dir else config.out_path
        self.status = CommandStatus.PENDING
        self.accounting: Optional[ParamAccounting] = None
        self.resources: Optional[ResourceAccounting] = None

    @abstractmethod
    def execute(self, result: CommandResult) -> None:
        """
        Do the work, recording artifacts and data on ``result``.

        Args:
            result: Result being filled in
        """

    def validate(self) -> None:
        """Account parameters and hardware resources; check the declared parameter count."""
        model = build_model(self.config.architecture)
        self.accounting = model.param_accounting()
        self.resources = model.resource_accounting()
        expected = self.config.expected_params
        if expected is not None and expected != self.accounting.total:
            raise ConfigError(
                f"Architecture has {self.accounting.total} parameters "
                f"({self.accounting.conv} conv + {self.accounting.dense} dense), config expects {expected}"
            )

    def run(self) -> CommandResult:
        """Validate, write the config echo, execute and time the command."""
        result = CommandResult(command=self.name, status=CommandStatus.RUNNING, started_at=datetime.now(timezone.utc))
        self.status = CommandStatus.RUNNING
        self.validate()
        self.out_dir.mkdir(parents=True, exist_ok=True)
        echo = self.config.echo()
        echo["output_dir"] = str(self.out_dir)
        result.artifacts["config_echo"] = str(save_to_json(echo, self.out_dir / "config.echo.json"))
        try:
            self.execute(result)
        except Exception as e:
            self.status = result.status = CommandStatus.FAILED
            result.error = str(e)
            raise
        finally:
            result.completed_at = datetime.now(timezone.utc)
        self.status = result.status = CommandStatus.COMPLETED
        self.logger.info(f"{self.name} finished in {result.execution_time:.2f}s; artifacts in {self.out_dir}")
        return result

    def print_accounting(self) -> None:
        table = Table(title="Trainable parameters")
        table.add_column("conv", justify="right")
        table.add_column("dense", justify="right")
        table.add_column("total", justify="right")
        table.add_row(str(self.accounting.conv), str(self.accounting.dense), str(self.accounting.total))
        console.print(table)
        console.print(f"params_count = {self.accounting.conv} + {self.accounting.dense} = {self.accounting.total}")

    def print_resources(self) -> None:
        table = Table(title="Hardware resources")
        for column in ("layer", "modes", "photons", "beam splitters", "depth"):
            table.add_column(column, justify="left" if column == "layer" else "right")
        for layer in self.resources.layers:
            table.add_row(layer.layer, str(layer.modes), str(layer.photons), str(layer.beam_splitters), str(layer.depth))
        console.print(table)
        console.print(
            f"injected photons = {self.resources.injected_photons}, "
            f"beam splitters = {self.resources.beam_splitters}, depth = {self.resources.depth}"
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert command to dictionary."""
        return {
            "command": self.name,
            "config": self.config.name,
            "status": self.status.value,
            "out_dir": str(self.out_dir),
        }

    def __str__(self) -> str:
        return f"{self.__class__.__name__}(config={self.config.name}, status={self.status.value})"

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}("
            f"config={self.config.name!r}, "
            f"out_dir={str(self.out_dir)!r}, "
            f"status={self.status})"
        )
