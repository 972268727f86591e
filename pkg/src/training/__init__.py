"""Model, training loop, metrics and readout search."""

from src.training.metrics import ConfusionMatrix, EpochRecord, Metrics, accuracy, confusion, similarity
from src.training.model import (
    PQCNNModel,
    ResourceAccounting,
    architecture_accounting,
    architecture_resources,
    build_model,
    forward,
)
from src.training.readout_search import (
    ReadoutSearchResult,
    ReshuffledReadoutResult,
    reshuffled_readout_search,
    train_readout,
)
from src.training.trainer import (
    EncodedData,
    SeedResult,
    SeedStatus,
    Trainer,
    TrainingRun,
    gradient,
    mse_loss,
    run_seeds,
    train,
)

__all__ = [
    "ConfusionMatrix",
    "EncodedData",
    "EpochRecord",
    "Metrics",
    "PQCNNModel",
    "ReadoutSearchResult",
    "ReshuffledReadoutResult",
    "ResourceAccounting",
    "SeedResult",
    "SeedStatus",
    "Trainer",
    "TrainingRun",
    "accuracy",
    "architecture_accounting",
    "architecture_resources",
    "build_model",
    "confusion",
    "forward",
    "gradient",
    "mse_loss",
    "reshuffled_readout_search",
    "run_seeds",
    "similarity",
    "train",
    "train_readout",
]
