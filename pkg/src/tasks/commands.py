"""The generate, train, eval and inspect commands."""

from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import torch
from rich.table import Table

from src.config.experiment import ExperimentConfig
from src.datasets.bas import gen_bas, gen_custom_bas
from src.datasets.builder import build_split, load_or_generate, sidecar_path
from src.datasets.io import export_digits_csv, load_mnist8, save_angles_sidecar, save_samples_csv
from src.datasets.samples import Sample, class_counts
from src.errors import ConfigError, DataError, NumericalError
from src.fock.states import MixedState, PureState
from src.layers.readout import ReadoutStrategy, readout
from src.optics.circuit import with_random_phases
from src.tasks.base_task import BaseCommand, CommandResult, console
from src.training.metrics import METRIC_COLUMNS, accuracy, confusion, predictions, similarity
from src.training.model import PQCNNModel, build_model
from src.training.readout_search import reshuffled_readout_search, train_readout
from src.training.trainer import EncodedData, evaluate, run_seeds
from src.utils.helpers import load_from_json, save_to_csv, save_to_json
from src.utils.logger import log_errors

STAGES = ("qdl", "conv", "pooling", "dense", "readout")


def print_class_counts(title: str, counts: Dict[str, Dict[int, int]]) -> None:
    table = Table(title=title)
    table.add_column("set")
    table.add_column("label 0", justify="right")
    table.add_column("label 1", justify="right")
    for name, per_class in counts.items():
        table.add_row(name, str(per_class.get(0, 0)), str(per_class.get(1, 0)))
    console.print(table)


class GenerateCommand(BaseCommand):
    """Write the dataset CSV (and the angle sidecar for Custom BAS)."""

    name = "generate"

    def execute(self, result: CommandResult) -> None:
        dataset = self.config.dataset
        if dataset.kind == "mnist8":
            target = Path(dataset.path) if dataset.path else self.out_dir / "digits8.csv"
            export_digits_csv(target)
            samples = load_mnist8(target, tuple(dataset.digit_pair))
            result.artifacts["dataset"] = str(target)
        else:
            if dataset.kind == "custom_bas":
                samples = gen_custom_bas(dataset.n, dataset.sigma, dataset.seed, dataset.d1, dataset.d2)
            else:
                samples = gen_bas(dataset.d1, dataset.d2, dataset.n, dataset.seed)
            csv_path = save_samples_csv(samples, self.out_dir / "dataset.csv")
            result.artifacts["dataset"] = str(csv_path)
            if dataset.kind == "custom_bas":
                result.artifacts["angles"] = str(save_angles_sidecar(samples, sidecar_path(csv_path)))

        counts = class_counts(samples)
        result.data = {"samples": len(samples), "class_counts": counts}
        print_class_counts(f"{dataset.kind} dataset", {"all": counts})
        self.logger.info(f"Wrote {len(samples)} samples to {result.artifacts['dataset']}")


class TrainCommand(BaseCommand):
    """Train every seed and write metrics, models and the run summary."""

    name = "train"

    def execute(self, result: CommandResult) -> None:
        config = self.config
        self.print_accounting()
        self.print_resources()
        split = build_split(config.dataset)
        print_class_counts("split", split.class_counts)

        run, models = run_seeds(config.architecture, split, config.training)

        for seed_result in run.results:
            seed = seed_result.seed
            metrics_path = save_to_csv(
                seed_result.metrics.rows(), self.out_dir / f"metrics_seed{seed}.csv", fieldnames=METRIC_COLUMNS
            )
            model_path = save_to_json(models[seed].to_dict(), self.out_dir / f"model_seed{seed}.json")
            result.artifacts[f"metrics_seed{seed}"] = str(metrics_path)
            result.artifacts[f"model_seed{seed}"] = str(model_path)

        summary = run.summary()
        summary["dataset"] = {
            "kind": config.dataset.kind,
            "sigma": config.dataset.sigma if config.dataset.kind == "custom_bas" else None,
            "digit_pair": list(config.dataset.digit_pair) if config.dataset.kind == "mnist8" else None,
            "class_counts": split.class_counts,
        }
        summary["init"] = {
            "distribution": "uniform",
            "low": config.architecture.init_low,
            "high": config.architecture.init_high,
        }
        summary["resources"] = self.resources.to_dict()
        result.artifacts["summary"] = str(save_to_json(summary, self.out_dir / "summary.json"))
        result.data = summary
        self._print_summary(summary)

        if run.diverged:
            seeds = ", ".join(str(r.seed) for r in run.diverged)
            raise NumericalError(f"Training diverged for seed(s) {seeds}; see {result.artifacts['summary']}")

    def _print_summary(self, summary: Dict[str, Any]) -> None:
        table = Table(title=f"{self.config.name}: final accuracies")
        table.add_column("seed", justify="right")
        table.add_column("status")
        table.add_column("train acc", justify="right")
        table.add_column("test acc", justify="right")
        for seed in summary["seeds"]:
            final = seed["final"] or {}
            table.add_row(
                str(seed["seed"]),
                seed["status"],
                f"{final.get('train_acc', float('nan')):.3f}",
                f"{final.get('test_acc', float('nan')):.3f}",
            )
        console.print(table)
        if summary["mean_test_acc"] is not None:
            console.print(
                f"test accuracy {summary['mean_test_acc']:.3f} ± {summary['std_test_acc']:.3f} "
                f"over {summary['seeds_completed']} seed(s), best seed {summary['best_seed']}"
            )


class EvalCommand(BaseCommand):
    """Evaluate a trained model file on the recipe's test split."""

    name = "eval"

    def __init__(self, config: ExperimentConfig, model_path: Optional[Path] = None, out_dir: Optional[Path] = None):
        super().__init__(config, out_dir)
        self.model_path = Path(model_path) if model_path else self.out_dir / f"model_seed{config.training.first_seed}.json"

    def load_model(self) -> PQCNNModel:
        try:
            data = load_from_json(self.model_path)
        except FileNotFoundError as e:
            raise ConfigError(f"Model file not found: {self.model_path}") from e
        except ValueError as e:
            raise ConfigError(f"Model file {self.model_path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Model file {self.model_path} must hold a JSON object")
        model = PQCNNModel.from_dict(data)
        if list(model.layout.sizes) != list(self.config.architecture.registers):
            raise ConfigError(
                f"Model registers {list(model.layout.sizes)} do not match the config registers "
                f"{self.config.architecture.registers}"
            )
        return model

    def execute(self, result: CommandResult) -> None:
        model = self.load_model()
        split = build_split(self.config.dataset)
        data = EncodedData.from_split(model, split)

        with torch.no_grad():
            probs = model(data.test_x)
            loss, acc = evaluate(model, data.test_x, data.test_y)
        matrix = confusion(predictions(probs), data.test_y)
        report: Dict[str, Any] = {
            "model": str(self.model_path),
            "test_samples": len(split.test),
            "accuracy": acc,
            "loss": loss,
            "confusion": matrix.to_dict(),
        }

        evaluation = self.config.evaluation
        searching = evaluation.readout_search or evaluation.random_phases
        pool = self._full_dataset(model) if evaluation.reshuffles and searching else None
        if evaluation.readout_search:
            report["readout_search"] = self._search(model, data, pool)
        if evaluation.random_phases:
            report["random_phases"] = self._random_phases(model, data, pool)

        result.artifacts["metrics"] = str(save_to_json(report, self.out_dir / "eval_metrics.json"))
        rows = [
            {
                "predicted": p,
                "true_0": int(matrix.counts[p, 0]),
                "true_1": int(matrix.counts[p, 1]),
                "true_0_normalized": float(matrix.normalized[p, 0]),
                "true_1_normalized": float(matrix.normalized[p, 1]),
            }
            for p in (0, 1)
        ]
        result.artifacts["confusion"] = str(save_to_csv(rows, self.out_dir / "confusion.csv"))
        result.data = report
        console.print(f"test accuracy {acc:.3f} on {len(split.test)} samples")

    def _full_dataset(self, model: PQCNNModel) -> Tuple[torch.Tensor, torch.Tensor]:
        """Encoded inputs and labels of every sample, for reshuffled readout searches."""
        samples = load_or_generate(self.config.dataset)
        labels = torch.tensor([s.label for s in samples], dtype=torch.long)
        return model.encode([s.pixels for s in samples]), labels

    def _search(
        self, model: PQCNNModel, data: EncodedData, pool: Optional[Tuple[torch.Tensor, torch.Tensor]] = None
    ) -> Dict[str, Any]:
        """
        Fit both readout strategies on the training outputs and score them on the test set.

        With a ``pool`` of every sample, each search is also repeated over
        reshuffled splits and reported as mean and standard deviation.
        """
        with torch.no_grad():
            train_dist = model.dense_distribution(data.train_x)
            test_dist = model.dense_distribution(data.test_x)
            pool_dist = model.dense_distribution(pool[0]) if pool is not None else None
        evaluation, dataset = self.config.evaluation, self.config.dataset
        m, k = model.dense.m, model.layout.k
        found = {}
        for strategy in ReadoutStrategy:
            search = train_readout(train_dist, data.train_y.numpy(), m, k, strategy)
            test_probs = readout(test_dist, search.binning)
            test_acc = accuracy(test_probs, data.test_y)
            entry = search.to_dict()
            entry["test_accuracy"] = test_acc
            entry["test_confusion"] = confusion(predictions(test_probs), data.test_y).to_dict()
            if pool_dist is not None:
                shuffled = reshuffled_readout_search(
                    pool_dist, pool[1].numpy(), dataset.train_n, dataset.test_n, m, k, strategy,
                    evaluation.reshuffles, evaluation.reshuffle_seed,
                ).to_dict()
                entry["reshuffled"] = shuffled
                console.print(
                    f"{strategy.value} readout over {shuffled['reshuffles']} reshuffles: "
                    f"train {shuffled['train_accuracy_mean']:.3f} ± {shuffled['train_accuracy_std']:.3f}, "
                    f"test {shuffled['test_accuracy_mean']:.3f} ± {shuffled['test_accuracy_std']:.3f}"
                )
            found[strategy.value] = entry
            self.logger.info(
                f"{strategy.value} readout: {search.candidates_evaluated} candidates, "
                f"train {search.train_accuracy:.3f}, test {test_acc:.3f}"
            )
        return found

    def _random_phases(
        self, model: PQCNNModel, data: EncodedData, pool: Optional[Tuple[torch.Tensor, torch.Tensor]] = None
    ) -> Dict[str, Any]:
        """Freeze random dense phases, compare output distributions and refit the readout."""
        generator = torch.Generator().manual_seed(self.config.evaluation.phase_seed)
        dense = with_random_phases(model.dense, generator)
        shifted = PQCNNModel(
            model.layout, model.kernel_size, dense, model.alpha, model.readout_binning, model.pooling,
            model.params.detach().numpy(), model.nearest_rank1,
        )
        with torch.no_grad():
            ideal = model.dense_distribution(data.test_x)
            noisy = shifted.dense_distribution(data.test_x)
        scores = np.array([similarity(p, q) for p, q in zip(ideal, noisy)])
        return {
            "phase_seed": self.config.evaluation.phase_seed,
            "similarity_mean": float(scores.mean()) if len(scores) else None,
            "similarity_min": float(scores.min()) if len(scores) else None,
            "similarity": scores.tolist(),
            "readout_search": self._search(shifted, data, pool),
        }


class InspectCommand(BaseCommand):
    """Dump the state of one image after a pipeline stage."""

    name = "inspect"

    def __init__(self, config: ExperimentConfig, index: int, stage: str, seed: Optional[int] = None,
                 model_path: Optional[Path] = None, out_dir: Optional[Path] = None):
        super().__init__(config, out_dir)
        if stage not in STAGES:
            raise ConfigError(f"Unknown stage {stage!r}; choose one of {', '.join(STAGES)}")
        self.index = index
        self.stage = stage
        self.seed = config.training.first_seed if seed is None else seed
        self.model_path = Path(model_path) if model_path else None

    def load_model(self) -> PQCNNModel:
        path = self.model_path or self.out_dir / f"model_seed{self.seed}.json"
        if path.exists():
            self.logger.info(f"Using trained parameters from {path}")
            return PQCNNModel.from_dict(load_from_json(path))
        self.logger.info(f"No model file at {path}; using the seed-{self.seed} initialization")
        return build_model(self.config.architecture, self.seed)

    def execute(self, result: CommandResult) -> None:
        samples: List[Sample] = load_or_generate(self.config.dataset)
        if not 0 <= self.index < len(samples):
            raise DataError(f"Image index {self.index} outside the dataset (0..{len(samples) - 1})")
        sample = samples[self.index]
        model = self.load_model()
        with torch.no_grad():
            state = model.stages(sample.pixels)[self.stage]
        dump = {"stage": self.stage, "index": self.index, "label": sample.label}
        dump.update(describe_state(state))
        self.resources = model.resource_accounting()
        dump["resources"] = self.resources.to_dict()
        self.print_resources()
        path = save_to_json(dump, self.out_dir / f"inspect_{self.stage}_{self.index}.json")
        result.artifacts["dump"] = str(path)
        result.data = dump


def describe_state(state) -> Dict[str, Any]:
    """Distribution (and density diagonal) of a stage output."""
    if isinstance(state, torch.Tensor):
        return {"classes": [0, 1], "probabilities": [float(p) for p in state]}
    probabilities = state.probabilities().detach()
    dump: Dict[str, Any] = {
        "modes": state.basis.m,
        "photons": state.basis.k,
        "basis": [list(s.occupations) for s in state.basis.states],
        "probabilities": [float(p) for p in probabilities],
    }
    if isinstance(state, MixedState):
        dump["density_diagonal"] = [float(x) for x in torch.diagonal(state.rho).real.detach()]
    elif isinstance(state, PureState):
        dump["amplitudes"] = [[float(a.real), float(a.imag)] for a in state.amplitudes.detach()]
    return dump


@log_errors
def cmd_generate(config: ExperimentConfig, out_dir: Optional[Path] = None) -> CommandResult:
    return GenerateCommand(config, out_dir).run()


@log_errors
def cmd_train(config: ExperimentConfig, out_dir: Optional[Path] = None) -> CommandResult:
    return TrainCommand(config, out_dir).run()


@log_errors
def cmd_eval(config: ExperimentConfig, model_path: Optional[Path] = None, out_dir: Optional[Path] = None) -> CommandResult:
    return EvalCommand(config, model_path, out_dir).run()


@log_errors
def cmd_inspect(config: ExperimentConfig, index: int, stage: str, seed: Optional[int] = None,
                model_path: Optional[Path] = None, out_dir: Optional[Path] = None) -> CommandResult:
    return InspectCommand(config, index, stage, seed, model_path, out_dir).run()
