"""Shared fixtures and oracles."""

import os
from itertools import permutations

import numpy as np
import pytest
import torch
from scipy.stats import unitary_group


def pytest_collection_modifyitems(config, items):
    if os.environ.get("PQCNN_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set PQCNN_RUN_SLOW=1 to run end-to-end training")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def naive_permanent(a: np.ndarray) -> complex:
    """Permutation-sum expansion."""
    n = a.shape[0]
    return complex(sum(np.prod([a[i, p[i]] for i in range(n)]) for p in permutations(range(n))))


def random_unitary(m: int, seed: int) -> torch.Tensor:
    return torch.as_tensor(unitary_group.rvs(m, random_state=seed), dtype=torch.complex128)


@pytest.fixture
def rng():
    """Seeded numpy generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def small_config_data():
    """Tiny BAS recipe that trains in a couple of seconds."""
    return {
        "name": "tiny_bas",
        "dataset": {"kind": "bas", "d1": 4, "d2": 4, "n": 24, "seed": 3, "train_n": 16, "test_n": 8},
        "architecture": {"registers": [4, 4], "kernel_size": 2, "alpha": 2, "dense_mesh": "compact"},
        "training": {"epochs": 2, "seeds": 1, "batch_size": 4, "learning_rate": 0.05},
        "evaluation": {"readout_search": True},
        "expected_params": 10,
    }
