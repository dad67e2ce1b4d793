"""Input validation helpers shared by the library and the estimator."""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.utils.validation import check_array


def check_genome(genome) -> np.ndarray:
    """Return ``genome`` as a 1-D ``uint8`` array of 0/1 genes.

    Raises ValueError for other shapes, lengths below 2 or non-binary genes.
    """
    x = np.asarray(genome)
    if x.ndim != 1:
        raise ValueError(f"genome must be 1-D, got shape {x.shape}")
    if x.shape[0] < 2:
        raise ValueError("genome length must be at least 2")
    if x.dtype != np.uint8:
        if not np.all((x == 0) | (x == 1)):
            raise ValueError("genes must be 0 or 1")
        return x.astype(np.uint8)
    if x.max(initial=0) > 1:
        raise ValueError("genes must be 0 or 1")
    return x


def check_genomes(genomes) -> np.ndarray:
    """2-D variant of :func:`check_genome`; rows are genomes."""
    x = np.asarray(genomes)
    if x.dtype == np.uint8 and x.ndim == 2:
        if x.max(initial=0) > 1:
            raise ValueError("genes must be 0 or 1")
    else:
        x = check_array(x, dtype=None, ensure_2d=True)
        if not np.all((x == 0) | (x == 1)):
            raise ValueError("genes must be 0 or 1")
        x = x.astype(np.uint8)
    if x.shape[1] < 2:
        raise ValueError("genome length must be at least 2")
    return x


def check_probability(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be a probability in [0, 1], got {value!r}")
    return float(value)


def check_count(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)
