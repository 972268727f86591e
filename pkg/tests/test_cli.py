"""Tests for the command-line harness and experiment configs."""

import csv
import json
from pathlib import Path

import pytest

from main import build_parser, main
from src.config.experiment import ArchitectureConfig, ExperimentConfig, load_experiment_config, parse_experiment_config
from src.errors import ConfigError
from src.tasks import commands
from src.training import build_model
from src.utils.helpers import save_to_json

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def config_file(tmp_path, small_config_data):
    """Tiny recipe written to disk with its own output directory."""
    data = dict(small_config_data, output_dir=str(tmp_path / "run"))
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(data))
    return path


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


class TestConfig:
    """Test experiment config validation."""

    def test_defaults(self, small_config_data):
        """Test that omitted sections take their defaults."""
        config = parse_experiment_config(small_config_data)
        assert config.training.weight_decay == 1e-4
        assert config.architecture.readout == "mode_group"
        assert config.training.seed_list == [0]

    def test_unknown_key(self, small_config_data):
        """Test that typos are rejected."""
        small_config_data["training"]["epoch"] = 3
        with pytest.raises(ConfigError):
            parse_experiment_config(small_config_data)

    def test_layout_must_match_images(self, small_config_data):
        """Test registers against image size."""
        small_config_data["architecture"]["registers"] = [8, 8]
        with pytest.raises(ConfigError):
            parse_experiment_config(small_config_data)

    def test_split_larger_than_dataset(self, small_config_data):
        """Test train_n + test_n above n."""
        small_config_data["dataset"]["train_n"] = 20
        with pytest.raises(ConfigError):
            parse_experiment_config(small_config_data)

    def test_missing_file(self, tmp_path):
        """Test a config path that does not exist."""
        with pytest.raises(ConfigError):
            load_experiment_config(tmp_path / "missing.json")

    def test_shipped_recipes(self):
        """Test the recipes under configs/ validate."""
        for name, params in (("bas", 10), ("custom_bas", 10), ("mnist8", 30)):
            config = load_experiment_config(CONFIGS / f"{name}.json")
            assert isinstance(config, ExperimentConfig)
            assert config.expected_params == params

    def test_recipe_batch_size_documented(self):
        """Test per-sample recipes are called out next to the recipes."""
        notes = (CONFIGS / "README.md").read_text()
        assert "## Batch size" in notes
        for name in ("bas", "custom_bas", "mnist8"):
            config = load_experiment_config(CONFIGS / f"{name}.json")
            assert config.training.batch_size == 1
            assert f"`{name}.json`" in notes
        assert parse_experiment_config({}).training.batch_size is None


class TestGenerate:
    """Test the generate command."""

    def test_writes_dataset(self, config_file, tmp_path):
        """Test the dataset CSV and config echo."""
        assert main(["generate", "--config", str(config_file)]) == 0
        run = tmp_path / "run"
        lines = [l for l in (run / "dataset.csv").read_text().splitlines() if not l.startswith("#")]
        assert len(lines) == 24
        echo = json.loads((run / "config.echo.json").read_text())
        assert echo["training"]["learning_rate"] == 0.05
        assert echo["output_dir"] == str(run)

    def test_custom_bas_sidecar(self, tmp_path, small_config_data):
        """Test that Custom BAS writes its angle sidecar."""
        small_config_data["dataset"]["kind"] = "custom_bas"
        path = tmp_path / "custom.json"
        path.write_text(json.dumps(small_config_data))
        assert main(["generate", "--config", str(path), "--out", str(tmp_path / "out")]) == 0
        angles = json.loads((tmp_path / "out" / "dataset.angles.json").read_text())
        assert len(angles) == 24

    def test_seed_override(self, config_file, tmp_path):
        """Test that --seed changes the generated data."""
        main(["generate", "--config", str(config_file), "--out", str(tmp_path / "a")])
        main(["generate", "--config", str(config_file), "--out", str(tmp_path / "b"), "--seed", "99"])
        assert (tmp_path / "a" / "dataset.csv").read_bytes() != (tmp_path / "b" / "dataset.csv").read_bytes()


class TestTrain:
    """Test the train command."""

    def test_outputs(self, config_file, tmp_path):
        """Test metrics, model and summary files."""
        assert main(["train", "--config", str(config_file)]) == 0
        run = tmp_path / "run"
        rows = read_csv(run / "metrics_seed0.csv")
        assert list(rows[0]) == ["epoch", "train_loss", "train_acc", "test_loss", "test_acc"]
        assert [r["epoch"] for r in rows] == ["0", "1", "2"]
        summary = json.loads((run / "summary.json").read_text())
        assert summary["params_count"] == 10
        assert summary["seeds_completed"] == 1
        assert summary["dataset"]["kind"] == "bas"
        assert summary["resources"]["injected_photons"] == 2
        assert [layer["modes"] for layer in summary["resources"]["layers"]] == [8, 8, 8, 6]
        assert [layer["photons"] for layer in summary["resources"]["layers"]] == [2, 2, 4, 2]
        assert json.loads((run / "model_seed0.json").read_text())["registers"] == [4, 4]

    def test_reproducible_bytes(self, config_file, tmp_path):
        """Test two runs write identical metrics."""
        main(["train", "--config", str(config_file), "--out", str(tmp_path / "a")])
        main(["train", "--config", str(config_file), "--out", str(tmp_path / "b")])
        assert (tmp_path / "a" / "metrics_seed0.csv").read_bytes() == (tmp_path / "b" / "metrics_seed0.csv").read_bytes()

    def test_epochs_and_seed_override(self, config_file, tmp_path):
        """Test --epochs 0 and a single --seed."""
        assert main(["train", "--config", str(config_file), "--epochs", "0", "--seed", "7"]) == 0
        rows = read_csv(tmp_path / "run" / "metrics_seed7.csv")
        assert [r["epoch"] for r in rows] == ["0"]

    def test_expected_params_mismatch(self, tmp_path, small_config_data):
        """Test the declared parameter count is enforced."""
        small_config_data["expected_params"] = 12
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(small_config_data))
        assert main(["train", "--config", str(path), "--out", str(tmp_path / "out")]) == 2

    def test_divergence_exit_code(self, config_file, tmp_path, mocker):
        """Test a diverging seed fails with exit code 4."""
        real_run_seeds = commands.run_seeds

        def diverging(arch, split, training):
            return real_run_seeds(arch, split, training.model_copy(update={"learning_rate": float("inf")}))

        mocker.patch.object(commands, "run_seeds", side_effect=diverging)
        assert main(["train", "--config", str(config_file)]) == 4
        summary = json.loads((tmp_path / "run" / "summary.json").read_text())
        assert summary["seeds_diverged"] == [0]


class TestEval:
    """Test the eval command."""

    def test_reports(self, config_file, tmp_path):
        """Test accuracy, confusion and readout search reports."""
        main(["train", "--config", str(config_file)])
        assert main(["eval", "--config", str(config_file), "--seed", "0"]) == 0
        run = tmp_path / "run"
        report = json.loads((run / "eval_metrics.json").read_text())
        assert report["test_samples"] == 8
        assert 0.0 <= report["accuracy"] <= 1.0
        assert report["readout_search"]["cluster"]["candidates_evaluated"] == 12870
        assert report["readout_search"]["mode_group"]["candidates_evaluated"] == 15
        reshuffled = report["readout_search"]["mode_group"]["reshuffled"]
        assert reshuffled["reshuffles"] == 30
        assert len(reshuffled["test_accuracies"]) == 30
        assert 0.0 <= reshuffled["test_accuracy_mean"] <= 1.0
        assert reshuffled["test_accuracy_std"] >= 0.0
        rows = read_csv(run / "confusion.csv")
        for column in ("true_0_normalized", "true_1_normalized"):
            assert sum(float(r[column]) for r in rows) == pytest.approx(1.0)

    def test_reshuffle_override(self, config_file, tmp_path):
        """Test --reshuffles sets the split count and 0 turns reshuffling off."""
        main(["train", "--config", str(config_file)])
        assert main(["eval", "--config", str(config_file), "--reshuffles", "3"]) == 0
        report = json.loads((tmp_path / "run" / "eval_metrics.json").read_text())
        assert report["readout_search"]["cluster"]["reshuffled"]["reshuffles"] == 3
        assert main(["eval", "--config", str(config_file), "--reshuffles", "0"]) == 0
        report = json.loads((tmp_path / "run" / "eval_metrics.json").read_text())
        assert "reshuffled" not in report["readout_search"]["cluster"]

    def test_random_phases(self, config_file, tmp_path, small_config_data):
        """Test the random-phase similarity report."""
        main(["train", "--config", str(config_file)])
        small_config_data["evaluation"] = {"readout_search": False, "random_phases": True, "phase_seed": 1}
        small_config_data["output_dir"] = str(tmp_path / "run")
        path = tmp_path / "phases.json"
        path.write_text(json.dumps(small_config_data))
        assert main(["eval", "--config", str(path)]) == 0
        report = json.loads((tmp_path / "run" / "eval_metrics.json").read_text())
        phases = report["random_phases"]
        assert len(phases["similarity"]) == 8
        assert all(0.0 <= s <= 1.0 + 1e-9 for s in phases["similarity"])
        assert "readout_search" not in report

    def test_missing_model(self, config_file):
        """Test eval before training."""
        assert main(["eval", "--config", str(config_file)]) == 2

    def test_register_mismatch(self, config_file, tmp_path):
        """Test a model trained for another layout."""
        other = ArchitectureConfig(registers=[8, 8], alpha=0, nearest_rank1=True)
        model_path = save_to_json(build_model(other, 0).to_dict(), tmp_path / "other.json")
        assert main(["eval", "--config", str(config_file), "--model", str(model_path)]) == 2


class TestInspect:
    """Test the inspect command."""

    @pytest.mark.parametrize("stage", ["qdl", "conv", "pooling", "dense"])
    def test_stage_dump(self, config_file, tmp_path, stage):
        """Test normalized stage distributions."""
        assert main(["inspect", "--config", str(config_file), "--index", "3", "--stage", stage]) == 0
        dump = json.loads((tmp_path / "run" / f"inspect_{stage}_3.json").read_text())
        assert sum(dump["probabilities"]) == pytest.approx(1.0, abs=1e-9)
        assert len(dump["basis"]) == len(dump["probabilities"])
        assert dump["resources"]["beam_splitters"] == 18

    def test_readout_dump(self, config_file, tmp_path):
        """Test the class probability dump."""
        assert main(["inspect", "--config", str(config_file), "--stage", "readout"]) == 0
        dump = json.loads((tmp_path / "run" / "inspect_readout_0.json").read_text())
        assert dump["classes"] == [0, 1]
        assert sum(dump["probabilities"]) == pytest.approx(1.0)

    def test_index_out_of_range(self, config_file):
        """Test an index beyond the dataset."""
        assert main(["inspect", "--config", str(config_file), "--index", "24"]) == 3

    def test_invalid_stage(self, config_file):
        """Test argparse rejects unknown stages."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["inspect", "--config", str(config_file), "--stage", "flatten"])


class TestExitCodes:
    """Test error to exit code mapping."""

    def test_bad_config(self, tmp_path):
        """Test invalid JSON."""
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["train", "--config", str(path)]) == 2

    def test_mnist_without_path(self, tmp_path):
        """Test a digits recipe with no data file."""
        data = {
            "dataset": {"kind": "mnist8", "d1": 8, "d2": 8, "train_n": 4, "test_n": 4},
            "architecture": {"registers": [8, 8], "alpha": 0, "nearest_rank1": True},
            "training": {"epochs": 0, "seeds": 1},
        }
        path = tmp_path / "digits.json"
        path.write_text(json.dumps(data))
        assert main(["train", "--config", str(path), "--out", str(tmp_path / "out")]) == 3


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
