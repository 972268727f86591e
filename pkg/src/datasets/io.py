"""Dataset files: pixel CSV, loader-angle sidecar and 8x8 digits ingestion."""

import csv
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from src.datasets.samples import Sample
from src.errors import DataError, EmptyClassError, ParseError
from src.utils.helpers import format_value, load_from_json, save_to_json
from src.utils.logger import logger

PathLike = Union[str, Path]

DIGIT_PIXELS = 64
DIGIT_MAX = 16.0


def save_samples_csv(samples: Sequence[Sample], path: PathLike) -> Path:
    """
    Write ``p1,...,p(d1*d2),label`` rows (row-major pixels) under a ``#`` header.

    Args:
        samples: Samples to write
        path: Output file

    Returns:
        The written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    shape = samples[0].pixels.shape if samples else (0, 0)
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(f"# pixels row-major {shape[0]}x{shape[1]}, then label\n")
        writer = csv.writer(f, lineterminator="\n")
        for s in samples:
            writer.writerow([format_value(float(p)) for p in s.pixels.reshape(-1)] + [s.label])
    return path


def _rows(path: Path):
    """Non-empty, non-comment rows with their 1-based line numbers."""
    try:
        handle = open(path, "r", encoding="utf-8", newline="")
    except OSError as e:
        raise DataError(f"Cannot read dataset file {path}: {e}") from e
    with handle:
        for line_no, row in enumerate(csv.reader(handle), start=1):
            if not row or not "".join(row).strip():
                continue
            if row[0].lstrip().startswith("#"):
                continue
            yield line_no, row


def _parse_numbers(row: List[str], path: Path, line_no: int) -> List[float]:
    try:
        values = [float(x) for x in row]
    except ValueError:
        raise ParseError("non-numeric field", path, line_no) from None
    if not all(np.isfinite(values)):
        raise ParseError("non-finite value", path, line_no)
    return values


def load_samples_csv(path: PathLike, shape: Tuple[int, int]) -> List[Sample]:
    """
    Read a dataset CSV written by ``save_samples_csv``.

    Raises:
        ParseError: For a malformed row, with its line number
    """
    path = Path(path)
    width = shape[0] * shape[1]
    samples = []
    for line_no, row in _rows(path):
        if len(row) != width + 1:
            raise ParseError(f"expected {width + 1} columns, got {len(row)}", path, line_no)
        values = _parse_numbers(row, path, line_no)
        label = values[-1]
        if label not in (0.0, 1.0):
            raise ParseError(f"label must be 0 or 1, got {row[-1]}", path, line_no)
        pixels = np.array(values[:-1], dtype=np.float64).reshape(shape)
        samples.append(Sample(pixels, int(label)))
    return samples


def save_angles_sidecar(samples: Sequence[Sample], path: PathLike) -> Path:
    """JSON array of per-sample loader angles, one list per register."""
    angles = [[list(register) for register in s.qdl_params] if s.qdl_params else None for s in samples]
    return save_to_json(angles, path)


def load_angles_sidecar(path: PathLike) -> List[Optional[Tuple[Tuple[float, ...], ...]]]:
    try:
        data = load_from_json(path)
    except (OSError, ValueError) as e:
        raise DataError(f"Cannot read angle sidecar {path}: {e}") from e
    return [tuple(tuple(float(a) for a in register) for register in entry) if entry else None for entry in data]


def attach_angles(samples: Sequence[Sample], angles: Sequence) -> List[Sample]:
    if len(angles) != len(samples):
        raise DataError(f"Sidecar holds {len(angles)} entries for {len(samples)} samples")
    return [Sample(s.pixels, s.label, a) for s, a in zip(samples, angles)]


def load_mnist8(path: PathLike, digit_pair: Tuple[int, int] = (0, 1)) -> List[Sample]:
    """
    Load 8x8 digits from ``p1,...,p64,digit`` rows with pixels in [0, 16].

    The first digit of ``digit_pair`` becomes label 0, the second label 1. A
    header line (``#`` comment or non-numeric) is skipped.

    Raises:
        ParseError: Malformed row or all-zero image, with its line number
        EmptyClassError: If a digit of the pair does not occur
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"Digits file not found: {path}")
    samples = []
    first = True
    for line_no, row in _rows(path):
        if first:
            first = False
            if any(c.isalpha() for c in "".join(row)):
                continue
        if len(row) != DIGIT_PIXELS + 1:
            raise ParseError(f"expected {DIGIT_PIXELS + 1} columns, got {len(row)}", path, line_no)
        values = _parse_numbers(row, path, line_no)
        digit = values[-1]
        if digit != int(digit) or not 0 <= digit <= 9:
            raise ParseError(f"digit label must be an integer 0-9, got {row[-1]}", path, line_no)
        if int(digit) not in digit_pair:
            continue
        pixels = np.array(values[:-1], dtype=np.float64)
        if pixels.min() < 0 or pixels.max() > DIGIT_MAX:
            raise ParseError(f"pixels must lie in [0, {DIGIT_MAX:g}]", path, line_no)
        if not pixels.any():
            raise ParseError("all-zero image cannot be loaded", path, line_no)
        samples.append(Sample((pixels / DIGIT_MAX).reshape(8, 8), digit_pair.index(int(digit))))

    for label, digit in enumerate(digit_pair):
        if not any(s.label == label for s in samples):
            raise EmptyClassError(f"Digit {digit} does not occur in {path}")
    logger.debug(f"Loaded {len(samples)} digits {digit_pair} from {path}")
    return samples


def export_digits_csv(path: PathLike) -> Path:
    """
    Write scikit-learn's 8x8 digits in the ``p1,...,p64,digit`` format.

    Raises:
        DataError: If scikit-learn is not installed
    """
    try:
        from sklearn.datasets import load_digits
    except ImportError as e:
        raise DataError("scikit-learn is required to export the 8x8 digits dataset") from e
    digits = load_digits()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write("# 8x8 digits, pixels row-major in [0,16], then digit\n")
        writer = csv.writer(f, lineterminator="\n")
        for pixels, target in zip(digits.data, digits.target):
            writer.writerow([int(p) for p in pixels] + [int(target)])
    return path
