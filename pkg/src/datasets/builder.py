"""Build or load the dataset a recipe asks for."""

from pathlib import Path
from typing import List

from src.config.experiment import DatasetConfig
from src.datasets.bas import gen_bas, gen_custom_bas
from src.datasets.io import attach_angles, load_angles_sidecar, load_mnist8, load_samples_csv
from src.datasets.samples import DatasetSplit, Sample, split
from src.errors import DataError


def sidecar_path(csv_path: Path) -> Path:
    return csv_path.with_name(csv_path.stem + ".angles.json")


def load_or_generate(config: DatasetConfig) -> List[Sample]:
    """
    Samples of a dataset config.

    BAS-family data is read from ``path`` when given and regenerated
    deterministically otherwise; 8x8 digits always come from ``path``.
    """
    if config.kind == "mnist8":
        if not config.path:
            raise DataError("mnist8 needs dataset.path; 'generate' exports the digits CSV when scikit-learn is installed")
        return load_mnist8(config.path, tuple(config.digit_pair))

    if config.path:
        path = Path(config.path)
        if not path.exists():
            raise DataError(f"Dataset file not found: {path}")
        samples = load_samples_csv(path, (config.d1, config.d2))
        if config.kind == "custom_bas" and sidecar_path(path).exists():
            samples = attach_angles(samples, load_angles_sidecar(sidecar_path(path)))
        return samples

    if config.kind == "custom_bas":
        return gen_custom_bas(config.n, config.sigma, config.seed, config.d1, config.d2)
    return gen_bas(config.d1, config.d2, config.n, config.seed)


def build_split(config: DatasetConfig) -> DatasetSplit:
    return split(load_or_generate(config), config.train_n, config.test_n, config.split_seed)
