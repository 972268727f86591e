"""Full training runs of the shipped recipes (slow; set PQCNN_RUN_SLOW=1)."""

from pathlib import Path

import pytest

from src.config.experiment import load_experiment_config
from src.datasets import build_split, export_digits_csv
from src.training import run_seeds
from src.utils.logger import logger

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def mean_test_accuracy(config) -> float:
    split = build_split(config.dataset)
    run, _ = run_seeds(config.architecture, split, config.training)
    summary = run.summary()
    assert summary["params_count"] == config.expected_params
    assert summary["seeds_diverged"] == []
    logger.info(f"{config.name}: test accuracy {summary['mean_test_acc']:.3f} ± {summary['std_test_acc']:.3f}")
    return summary["mean_test_acc"]


@pytest.mark.slow
class TestRecipes:
    """Test mean test accuracy over the recipe seeds."""

    def test_bas(self):
        """Test 4x4 bars and stripes."""
        assert mean_test_accuracy(load_experiment_config(CONFIGS / "bas.json")) >= 0.89

    def test_custom_bas(self):
        """Test noisy-angle bars and stripes."""
        assert mean_test_accuracy(load_experiment_config(CONFIGS / "custom_bas.json")) >= 0.86

    def test_mnist8(self, tmp_path):
        """Test the 0/1 digit pair on the 16-mode architecture."""
        pytest.importorskip("sklearn")
        config = load_experiment_config(CONFIGS / "mnist8.json")
        path = export_digits_csv(tmp_path / "digits8.csv")
        dataset = config.dataset.model_copy(update={"path": str(path)})
        assert mean_test_accuracy(config.model_copy(update={"dataset": dataset})) >= 0.85


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
