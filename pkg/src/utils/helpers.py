"""File helpers shared by the datasets and the command harness."""

import csv
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np


def _to_jsonable(value: Any) -> Any:
    """Fallback encoder for numpy scalars/arrays and paths."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    return str(value)


def save_to_json(data: Any, filepath: Union[str, Path]) -> Path:
    """
    Save data to JSON file.

    Args:
        data: Data to save
        filepath: Path to save file

    Returns:
        The written path
    """
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)

    with open(filepath, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False, default=_to_jsonable)
        f.write("\n")
    return filepath


def load_from_json(filepath: Union[str, Path]) -> Any:
    """
    Load data from JSON file.

    Args:
        filepath: Path to JSON file

    Returns:
        Loaded data
    """
    with open(filepath, "r", encoding="utf-8") as f:
        return json.load(f)


def save_to_csv(
    data: List[Dict[str, Any]],
    filepath: Union[str, Path],
    fieldnames: Optional[Sequence[str]] = None,
) -> Path:
    """
    Save rows to a CSV file.

    Floats are written with ``repr`` so the file reloads bit-exactly and two
    identical runs produce identical bytes.

    Args:
        data: List of dictionaries to save
        filepath: Path to save file
        fieldnames: Column order (defaults to the keys of the first row)

    Returns:
        The written path
    """
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)

    keys = list(fieldnames) if fieldnames is not None else (list(data[0].keys()) if data else [])

    with open(filepath, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        for row in data:
            writer.writerow({k: format_value(v) for k, v in row.items()})
    return filepath


def format_value(value: Any) -> Any:
    """Render floats (numpy included) with round-trip precision."""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return int(value)
    return value
