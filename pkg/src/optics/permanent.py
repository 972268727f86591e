"""Matrix permanents via Ryser's formula."""

from functools import lru_cache
from typing import Tuple

import numpy as np
import torch

from src.errors import DimensionError

MAX_PERMANENT_SIZE = 20


def permanent(a) -> complex:
    """
    Permanent of a square matrix with Ryser's formula in Gray-code order.

    Args:
        a: Complex ``n`` x ``n`` matrix, ``n <= 20``

    Returns:
        The permanent as a Python complex

    Raises:
        DimensionError: If the matrix is not square or too large
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"Permanent needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > MAX_PERMANENT_SIZE:
        raise DimensionError(f"Permanent limited to n <= {MAX_PERMANENT_SIZE}, got {n}")
    if n == 0:
        return 1.0 + 0.0j

    row_sums = np.zeros(n, dtype=np.complex128)
    in_subset = np.zeros(n, dtype=bool)
    size = 0
    total = 0.0 + 0.0j
    for step in range(1, 1 << n):
        # Gray code flips the lowest set bit of the step counter
        column = (step & -step).bit_length() - 1
        if in_subset[column]:
            row_sums -= a[:, column]
            size -= 1
        else:
            row_sums += a[:, column]
            size += 1
        in_subset[column] = not in_subset[column]
        term = np.prod(row_sums)
        total += -term if size % 2 else term
    return complex(total if n % 2 == 0 else -total)


@lru_cache(maxsize=16)
def _subset_table(n: int) -> Tuple[torch.Tensor, torch.Tensor]:
    """Membership masks and Ryser signs of the non-empty column subsets."""
    subsets = torch.arange(1, 1 << n)
    masks = ((subsets[:, None] >> torch.arange(n)[None, :]) & 1).to(torch.complex128)
    sizes = masks.real.sum(dim=1)
    signs = (1.0 - 2.0 * ((n - sizes) % 2)).to(torch.complex128)
    return masks, signs


def batched_permanent(a: torch.Tensor) -> torch.Tensor:
    """
    Permanents of a batch of square matrices.

    Evaluates every column subset at once, so it is meant for the small
    (``n <= k``) submatrices of a photon-number lift. Differentiable.

    Args:
        a: Tensor of shape ``(..., n, n)``

    Returns:
        Tensor of shape ``(...)``
    """
    if a.shape[-1] != a.shape[-2]:
        raise DimensionError(f"Permanent needs square matrices, got trailing shape {tuple(a.shape[-2:])}")
    n = a.shape[-1]
    if n == 0:
        return torch.ones(a.shape[:-2], dtype=torch.complex128)
    if n == 1:
        return a[..., 0, 0]
    masks, signs = _subset_table(n)
    # (..., n rows, subsets): row sums restricted to each column subset
    row_sums = a.to(torch.complex128) @ masks.T
    return (row_sums.prod(dim=-2) * signs).sum(dim=-1)
