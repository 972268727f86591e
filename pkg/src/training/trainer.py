"""Loss, gradients and the multi-seed ADAM training loop."""

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import torch
import torch.nn.functional as F

from src.config.experiment import ArchitectureConfig, TrainConfig
from src.config.settings import settings
from src.errors import ParameterError
from src.training.executor import SeedExecutor
from src.training.metrics import EpochRecord, Metrics, accuracy
from src.training.model import ParamAccounting, PQCNNModel, build_model
from src.utils.logger import LoggerMixin, log_execution_time

Labels = Union[int, Sequence[int], torch.Tensor]


class SeedStatus(Enum):
    """Outcome of one training seed."""
    COMPLETED = "completed"
    DIVERGED = "diverged"


@dataclass
class EncodedData:
    """Tensor coefficients and labels of the train and test sets."""
    train_x: torch.Tensor
    train_y: torch.Tensor
    test_x: torch.Tensor
    test_y: torch.Tensor

    @classmethod
    def from_split(cls, model: PQCNNModel, split) -> "EncodedData":
        def labels(samples):
            return torch.tensor([s.label for s in samples], dtype=torch.long)

        return cls(
            train_x=model.encode([s.pixels for s in split.train]),
            train_y=labels(split.train),
            test_x=model.encode([s.pixels for s in split.test]),
            test_y=labels(split.test),
        )


@dataclass
class SeedResult:
    """Result from training one seed."""
    seed: int
    status: SeedStatus
    metrics: Metrics
    params: List[float]
    error: Optional[str] = None
    duration_s: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        final = self.metrics.final
        return {
            "seed": self.seed,
            "status": self.status.value,
            "error": self.error,
            "epochs_completed": final.epoch if final else 0,
            "final": final.to_row() if final else None,
            "params": self.params,
            "duration_s": round(self.duration_s, 3),
        }


@dataclass
class TrainingRun:
    """All seeds of one recipe."""
    accounting: ParamAccounting
    results: List[SeedResult] = field(default_factory=list)

    @property
    def completed(self) -> List[SeedResult]:
        return [r for r in self.results if r.status is SeedStatus.COMPLETED]

    @property
    def diverged(self) -> List[SeedResult]:
        return [r for r in self.results if r.status is SeedStatus.DIVERGED]

    def best(self) -> Optional[SeedResult]:
        """Highest final test accuracy; ties go to the earlier seed."""
        best = None
        for result in self.completed:
            if best is None or result.metrics.final.test_acc > best.metrics.final.test_acc:
                best = result
        return best

    def summary(self) -> Dict[str, Any]:
        finals = [r.metrics.final for r in self.completed]
        train_acc = np.array([f.train_acc for f in finals])
        test_acc = np.array([f.test_acc for f in finals])
        best = self.best()
        return {
            "params_count": self.accounting.total,
            "params_decomposition": self.accounting.to_dict(),
            "seeds_completed": len(finals),
            "seeds_diverged": [r.seed for r in self.diverged],
            "mean_train_acc": float(train_acc.mean()) if finals else None,
            "std_train_acc": float(train_acc.std()) if finals else None,
            "mean_test_acc": float(test_acc.mean()) if finals else None,
            "std_test_acc": float(test_acc.std()) if finals else None,
            "best_seed": best.seed if best else None,
            "seeds": [r.to_dict() for r in self.results],
        }


def mse_loss(pred: torch.Tensor, label: Labels) -> torch.Tensor:
    """
    Squared distance between class probabilities and the one-hot label.

    Args:
        pred: Probabilities, shape ``(2,)`` or ``(N, 2)``
        label: Class index, or one per row

    Returns:
        Scalar or per-row loss
    """
    label = torch.as_tensor(label, dtype=torch.long)
    target = F.one_hot(label, num_classes=pred.shape[-1]).to(pred.dtype)
    return (pred - target).pow(2).sum(dim=-1)


def mean_loss(model: PQCNNModel, inputs: torch.Tensor, labels: torch.Tensor) -> torch.Tensor:
    return mse_loss(model(inputs), labels).mean()


def gradient(
    model: PQCNNModel,
    inputs: torch.Tensor,
    labels: Labels,
    method: str = "autograd",
    step: float = 1e-5,
) -> torch.Tensor:
    """
    Gradient of the mean loss over a batch with respect to ``model.params``.

    Args:
        model: Model to differentiate
        inputs: Tensor coefficients, shape ``(N, T)``
        labels: Class per row
        method: ``autograd`` (reverse mode) or ``finite_difference`` (central)
        step: Finite-difference step

    Returns:
        Float64 tensor of shape ``(n_params,)``
    """
    labels = torch.as_tensor(labels, dtype=torch.long).reshape(-1)
    if len(labels) == 0:
        raise ParameterError("Gradient needs a non-empty batch")
    if method == "autograd":
        model.zero_grad()
        loss = mean_loss(model, inputs, labels)
        (grad,) = torch.autograd.grad(loss, model.params)
        return grad.detach()
    if method != "finite_difference":
        raise ParameterError(f"Unknown gradient method {method!r}")

    base = model.params.detach().clone()
    grad = torch.zeros_like(base)
    with torch.no_grad():
        for i in range(len(base)):
            shift = torch.zeros_like(base)
            shift[i] = step
            model.params.copy_(base + shift)
            upper = mean_loss(model, inputs, labels)
            model.params.copy_(base - shift)
            lower = mean_loss(model, inputs, labels)
            grad[i] = (upper - lower) / (2 * step)
        model.params.copy_(base)
    return grad


@torch.no_grad()
def evaluate(model: PQCNNModel, inputs: torch.Tensor, labels: torch.Tensor) -> Tuple[float, float]:
    """Mean loss and accuracy of a dataset."""
    if len(labels) == 0:
        return 0.0, 0.0
    probs = model(inputs)
    return float(mse_loss(probs, labels).mean()), accuracy(probs, labels)


class Trainer(LoggerMixin):
    """ADAM with decoupled weight decay over the flat angle vector."""

    def __init__(self, config: TrainConfig):
        self.config = config

    def _batches(self, n: int, generator: torch.Generator) -> List[torch.Tensor]:
        if self.config.batch_size is None or self.config.batch_size >= n:
            return [torch.arange(n)]
        order = torch.randperm(n, generator=generator)
        return list(torch.split(order, self.config.batch_size))

    def _record(self, model: PQCNNModel, data: EncodedData, epoch: int) -> EpochRecord:
        train_loss, train_acc = evaluate(model, data.train_x, data.train_y)
        test_loss, test_acc = evaluate(model, data.test_x, data.test_y)
        return EpochRecord(epoch, train_loss, train_acc, test_loss, test_acc)

    def train(self, model: PQCNNModel, data: EncodedData, seed: int) -> SeedResult:
        """
        Train one model in place.

        Args:
            model: Initialized model
            data: Encoded train/test sets
            seed: Seed of the mini-batch order

        Returns:
            SeedResult with one record per epoch (epoch 0 is the initialization)
        """
        start = time.perf_counter()
        config = self.config
        optimizer = torch.optim.AdamW(
            [model.params], lr=config.learning_rate, weight_decay=config.weight_decay
        )
        generator = torch.Generator().manual_seed(seed)
        metrics = Metrics(records=[self._record(model, data, 0)])
        status, error = SeedStatus.COMPLETED, None

        for epoch in range(1, config.epochs + 1):
            for batch in self._batches(len(data.train_y), generator):
                inputs, labels = data.train_x[batch], data.train_y[batch]
                optimizer.zero_grad()
                if config.gradient_method == "autograd":
                    loss = mean_loss(model, inputs, labels)
                    if not torch.isfinite(loss):
                        status, error = SeedStatus.DIVERGED, f"non-finite loss at epoch {epoch}"
                        break
                    loss.backward()
                else:
                    model.params.grad = gradient(model, inputs, labels, "finite_difference", config.fd_step)
                optimizer.step()
                if not bool(torch.isfinite(model.params.detach()).all()):
                    status, error = SeedStatus.DIVERGED, f"non-finite parameter at epoch {epoch}"
                    break
            if status is SeedStatus.DIVERGED:
                self.logger.warning(f"Seed {seed} diverged: {error}")
                break

            record = self._record(model, data, epoch)
            if not (math.isfinite(record.train_loss) and math.isfinite(record.test_loss)):
                status, error = SeedStatus.DIVERGED, f"non-finite loss at epoch {epoch}"
                self.logger.warning(f"Seed {seed} diverged: {error}")
                break
            metrics.records.append(record)
            self.logger.info(
                f"seed={seed} epoch={epoch}/{config.epochs} "
                f"train_loss={record.train_loss:.4f} train_acc={record.train_acc:.3f} "
                f"test_loss={record.test_loss:.4f} test_acc={record.test_acc:.3f}"
            )

        return SeedResult(
            seed=seed,
            status=status,
            metrics=metrics,
            params=[float(x) for x in model.params.detach()],
            error=error,
            duration_s=time.perf_counter() - start,
        )


def train(model: PQCNNModel, dataset, config: TrainConfig, seed: int = 0) -> Tuple[PQCNNModel, Metrics]:
    """
    Train a model on a DatasetSplit (or pre-encoded data) for one seed.

    Returns:
        The trained model and its metrics
    """
    data = dataset if isinstance(dataset, EncodedData) else EncodedData.from_split(model, dataset)
    result = Trainer(config).train(model, data, seed)
    return model, result.metrics


@log_execution_time
def run_seeds(arch: ArchitectureConfig, split, config: TrainConfig) -> Tuple[TrainingRun, Dict[int, PQCNNModel]]:
    """
    Train one freshly initialized model per seed.

    Returns:
        The run record and the trained model of every seed
    """
    if settings.num_threads:
        torch.set_num_threads(settings.num_threads)
    reference = build_model(arch)
    data = EncodedData.from_split(reference, split)
    trainer = Trainer(config)
    models: Dict[int, PQCNNModel] = {}

    def job(seed: int) -> SeedResult:
        model = build_model(arch, seed)
        models[seed] = model
        return trainer.train(model, data, seed)

    results = SeedExecutor().run(config.seed_list, job)
    return TrainingRun(reference.param_accounting(), results), models
