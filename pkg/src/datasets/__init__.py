"""Bars-and-stripes generators, 8x8 digits ingestion and dataset files."""

from src.datasets.bas import gen_bas, gen_custom_bas, replay_custom_bas
from src.datasets.builder import build_split, load_or_generate
from src.datasets.io import (
    export_digits_csv,
    load_angles_sidecar,
    load_mnist8,
    load_samples_csv,
    save_angles_sidecar,
    save_samples_csv,
)
from src.datasets.samples import DatasetSplit, Sample, split

__all__ = [
    "DatasetSplit",
    "Sample",
    "build_split",
    "export_digits_csv",
    "gen_bas",
    "gen_custom_bas",
    "load_angles_sidecar",
    "load_mnist8",
    "load_or_generate",
    "load_samples_csv",
    "replay_custom_bas",
    "save_angles_sidecar",
    "save_samples_csv",
    "split",
]
