"""Low-autocorrelation binary sequences: autocorrelation and energy.

Genomes are stored as 0/1 ``uint8`` vectors. Spins are derived on demand
with ``s = 2 * x - 1``. All energy arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .validation import check_genome, check_genomes

EXHAUSTIVE_MAX_LENGTH = 20


def to_spins(genome) -> np.ndarray:
    """Map a 0/1 genome to its +/-1 spin vector."""
    x = check_genome(genome)
    return 2 * x.astype(np.int64) - 1


def from_spins(spins) -> np.ndarray:
    """Inverse of :func:`to_spins`."""
    s = np.asarray(spins)
    if not np.all((s == 1) | (s == -1)):
        raise ValueError("spins must be +1 or -1")
    return ((s + 1) // 2).astype(np.uint8)


def autocorrelation(genome, k: int) -> int:
    """Aperiodic autocorrelation of ``genome`` at lag ``k``."""
    s = to_spins(genome)
    n = s.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"lag k={k} out of range; valid lags are 1..{n - 1}")
    return int(np.dot(s[: n - k], s[k:]))


@lru_cache(maxsize=None)
def _lag_layout(n: int) -> tuple[np.ndarray, np.ndarray]:
    # Flat indices of (i, i + k) into an n x n matrix, grouped by lag k = 1..n-1.
    flat = []
    starts = []
    for k in range(1, n):
        starts.append(len(flat))
        i = np.arange(n - k)
        flat.extend(i * n + i + k)
    return np.asarray(flat, dtype=np.intp), np.asarray(starts, dtype=np.intp)


def batch_autocorrelations(genomes) -> np.ndarray:
    """Autocorrelation table for each row; column ``k - 1`` holds lag ``k``.

    Returns an ``(n_genomes, L - 1)`` int64 array.
    """
    x = check_genomes(genomes)
    s = 2 * x.astype(np.int8) - 1
    m, n = s.shape
    flat, starts = _lag_layout(n)
    products = (s[:, :, None] * s[:, None, :]).reshape(m, n * n)[:, flat]
    return np.add.reduceat(products, starts, axis=1, dtype=np.int64)


def batch_energy(genomes) -> np.ndarray:
    """Energy of every row of a 2-D genome array, as int64."""
    c = batch_autocorrelations(genomes)
    return (c * c).sum(axis=1)


def autocorrelations(genome) -> np.ndarray:
    """All lags ``1..L-1`` of a single genome."""
    return batch_autocorrelations(check_genome(genome)[None, :])[0]


def energy(genome) -> int:
    """Sum of squared aperiodic autocorrelations over lags ``1..L-1``."""
    c = autocorrelations(genome)
    return int((c * c).sum())


def energy_after_flip(genome, position: int, table) -> tuple[int, np.ndarray]:
    """Energy after flipping one bit, updating the lag table in O(L).

    ``table`` must hold the autocorrelations of the unflipped ``genome``
    (as returned by :func:`autocorrelations`). Returns the new energy and a
    fresh table for the flipped genome; neither input is modified.
    """
    s = to_spins(genome)
    n = s.shape[0]
    if not 0 <= position < n:
        raise ValueError(f"position {position} out of range; valid positions are 0..{n - 1}")
    table = np.asarray(table, dtype=np.int64)
    if table.shape != (n - 1,):
        raise ValueError(f"table must have shape ({n - 1},), got {table.shape}")

    # Padding with zeros makes the out-of-range neighbours vanish.
    padded = np.zeros(3 * n, dtype=np.int64)
    padded[n : 2 * n] = s
    lags = np.arange(1, n)
    neighbours = padded[n + position + lags] + padded[n + position - lags]
    updated = table - 2 * s[position] * neighbours
    return int((updated * updated).sum()), updated


def constant_energy(length: int) -> int:
    """Closed-form energy of a constant sequence, ``L(L-1)(2L-1)/6``."""
    return length * (length - 1) * (2 * length - 1) // 6


def exhaustive_optimum(length: int, chunk: int = 1 << 14) -> tuple[int, np.ndarray]:
    """Minimum energy over all ``2**length`` genomes and its first argmin.

    Genomes are enumerated in lexicographic order (gene 0 most significant),
    so the returned argmin is the lexicographically smallest optimum.
    """
    if length < 2:
        raise ValueError("length must be at least 2")
    if length > EXHAUSTIVE_MAX_LENGTH:
        raise ValueError(
            f"exhaustive search refused for length {length}; ceiling is {EXHAUSTIVE_MAX_LENGTH}"
        )
    shifts = np.arange(length - 1, -1, -1, dtype=np.int64)
    best_energy = None
    best_code = 0
    total = 1 << length
    for lo in range(0, total, chunk):
        codes = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        block = ((codes[:, None] >> shifts) & 1).astype(np.uint8)
        energies = batch_energy(block)
        i = int(np.argmin(energies))
        if best_energy is None or energies[i] < best_energy:
            best_energy = int(energies[i])
            best_code = int(codes[i])
    genome = ((best_code >> shifts) & 1).astype(np.uint8)
    return best_energy, genome
