"""Experiment recipes: pydantic models loaded from JSON files."""

import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.config.settings import settings
from src.errors import ConfigError
from src.utils.helpers import load_from_json


class DatasetConfig(BaseModel):
    """Which dataset to build and how to split it."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["bas", "custom_bas", "mnist8"] = "bas"
    d1: int = Field(default=4, ge=2)
    d2: int = Field(default=4, ge=2)
    n: int = Field(default=600, ge=1)
    sigma: float = Field(default=0.1, ge=0.0)
    digit_pair: Tuple[int, int] = (0, 1)
    seed: int = 0
    path: Optional[str] = None
    train_n: int = Field(default=400, ge=1)
    test_n: int = Field(default=200, ge=1)
    split_seed: int = 0

    @field_validator("digit_pair")
    @classmethod
    def validate_digit_pair(cls, v):
        if v[0] == v[1] or not all(0 <= d <= 9 for d in v):
            raise ValueError(f"digit_pair must hold two distinct digits, got {v}")
        return v

    @model_validator(mode="after")
    def check_shape(self):
        if self.kind == "mnist8" and (self.d1, self.d2) != (8, 8):
            raise ValueError("mnist8 images are 8x8")
        return self


class ArchitectureConfig(BaseModel):
    """Register layout, filter size, dense layer and readout strategy."""

    model_config = ConfigDict(extra="forbid")

    registers: List[int] = Field(default_factory=lambda: [4, 4])
    kernel_size: int = Field(default=2, ge=2)
    alpha: int = Field(default=2, ge=0)
    dense_mesh: Literal["universal", "compact"] = "universal"
    readout: Literal["mode_group", "cluster"] = "mode_group"
    dense_random_phases: bool = False
    nearest_rank1: bool = False
    init_low: float = 0.0
    init_high: float = math.pi / 2

    @field_validator("registers")
    @classmethod
    def validate_registers(cls, v):
        if not v or any(d < 2 for d in v):
            raise ValueError(f"registers need at least two modes each, got {v}")
        return v

    @model_validator(mode="after")
    def check_init_range(self):
        if not self.init_low < self.init_high:
            raise ValueError("init_low must be below init_high")
        return self


class TrainConfig(BaseModel):
    """Optimizer and loop settings."""

    model_config = ConfigDict(extra="forbid")

    epochs: int = Field(default=30, ge=0)
    learning_rate: float = Field(default=1e-3, ge=0.0)
    weight_decay: float = Field(default=1e-4, ge=0.0)
    seeds: int = Field(default=5, ge=1)
    first_seed: int = 0
    batch_size: Optional[int] = Field(default=None, ge=1)
    gradient_method: Literal["autograd", "finite_difference"] = "autograd"
    fd_step: float = Field(default=1e-5, gt=0.0)

    @property
    def seed_list(self) -> List[int]:
        return list(range(self.first_seed, self.first_seed + self.seeds))


class EvaluationConfig(BaseModel):
    """Post-training readout search and random-phase analysis."""

    model_config = ConfigDict(extra="forbid")

    readout_search: bool = True
    random_phases: bool = False
    phase_seed: int = 0
    reshuffles: int = Field(default=30, ge=0)
    reshuffle_seed: int = 0


class ExperimentConfig(BaseModel):
    """A complete, reproducible run recipe."""

    model_config = ConfigDict(extra="forbid")

    name: str = "experiment"
    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    architecture: ArchitectureConfig = Field(default_factory=ArchitectureConfig)
    training: TrainConfig = Field(default_factory=TrainConfig)
    evaluation: EvaluationConfig = Field(default_factory=EvaluationConfig)
    output_dir: Optional[str] = None
    expected_params: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def check_dataset_matches_layout(self):
        registers = self.architecture.registers
        if len(registers) == 2 and [self.dataset.d1, self.dataset.d2] != registers:
            raise ValueError(
                f"dataset images are {self.dataset.d1}x{self.dataset.d2} but registers are {registers}"
            )
        if self.dataset.train_n + self.dataset.test_n > self.dataset.n and self.dataset.kind != "mnist8":
            raise ValueError("train_n + test_n exceeds the dataset size n")
        return self

    @property
    def out_path(self) -> Path:
        return Path(self.output_dir) if self.output_dir else Path(settings.runs_dir) / self.name

    def echo(self) -> Dict[str, Any]:
        """Fully defaulted document, as written to ``config.echo.json``."""
        data = self.model_dump(mode="json")
        data["output_dir"] = str(self.out_path)
        return data


def parse_experiment_config(data: Dict[str, Any]) -> ExperimentConfig:
    """Validate a config document, raising ConfigError on any problem."""
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid experiment config: {e}") from e


def load_experiment_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Load and validate a JSON experiment config.

    Raises:
        ConfigError: If the file is missing, not JSON, or fails validation
    """
    try:
        data = load_from_json(path)
    except FileNotFoundError as e:
        raise ConfigError(f"Config file not found: {path}") from e
    except ValueError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object")
    return parse_experiment_config(data)
