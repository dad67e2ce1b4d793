"""Socio-cognitive mutation operators that pull offspring toward the best
members of the population or push them away from the worst.

Every operator takes a 0/1 genome (or a 2-D batch of them), a group of
reference genomes (rows of a 2-D array), a per-gene rate and a mode, and
returns new genomes. Inputs are never modified; random draws that the
operator makes once per invocation are made once per batch row. In ``"per-gene-rate"`` mode each gene is considered
independently with the given rate; in ``"single-gene"`` mode exactly one
position is changed per application.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .validation import check_count, check_probability

PER_GENE = "per-gene-rate"
SINGLE_GENE = "single-gene"
MUTATION_MODES = (PER_GENE, SINGLE_GENE)

FOLLOW_BEST = "follow_best"
FOLLOW_BEST_DISTINCT = "follow_best_distinct"
REPEL_WORST = "repel_worst_gravity"
REPEL_WORST_MULTISTEP = "repel_worst_gravity_multistep"
FOLLOW_STAGES = (FOLLOW_BEST, FOLLOW_BEST_DISTINCT)
REPEL_STAGES = (REPEL_WORST, REPEL_WORST_MULTISTEP)

VARIANTS = {
    "base": (),
    "fb": (FOLLOW_BEST,),
    "fbd": (FOLLOW_BEST_DISTINCT,),
    "rw": (REPEL_WORST,),
    "rwm": (REPEL_WORST_MULTISTEP,),
    "fb+rw": (FOLLOW_BEST, REPEL_WORST),
    "fb+rwm": (FOLLOW_BEST, REPEL_WORST_MULTISTEP),
    "fbd+rw": (FOLLOW_BEST_DISTINCT, REPEL_WORST),
    "fbd+rwm": (FOLLOW_BEST_DISTINCT, REPEL_WORST_MULTISTEP),
}

# mode id -> (mutation mode, per-gene rate)
MODES = {
    "rate05": (PER_GENE, 0.5),
    "single": (SINGLE_GENE, 0.5),
}


class ConfigurationError(ValueError):
    """Raised for invalid variant, mode or group-size settings."""


def _check_group(group) -> np.ndarray:
    group = np.asarray(group)
    if group.ndim != 2 or group.shape[0] == 0:
        raise ValueError("reference group must be a non-empty 2-D array of genomes")
    return group


def _check_mode(mode: str) -> None:
    if mode not in MUTATION_MODES:
        raise ValueError(f"unknown mutation mode {mode!r}; expected one of {MUTATION_MODES}")


def elite_set(genomes, energies, k: int) -> np.ndarray:
    """The ``k`` lowest-energy genomes, best first (ties by lowest index)."""
    order = np.argsort(np.asarray(energies), kind="stable")[:k]
    return np.asarray(genomes)[order]


def worst_set(genomes, energies, k: int) -> np.ndarray:
    """The ``k`` highest-energy genomes, worst first (ties by lowest index)."""
    order = np.argsort(-np.asarray(energies), kind="stable")[:k]
    return np.asarray(genomes)[order]


def _as_batch(x) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=np.uint8)
    return (x, False) if x.ndim == 2 else (x[None, :], True)


def _imitate(x: np.ndarray, targets: np.ndarray, rate: float, mode: str, rng) -> np.ndarray:
    # Copy genes of targets[r] into row r of x.
    n, length = x.shape
    if mode == SINGLE_GENE:
        out = x.copy()
        rows = np.arange(n)
        cols = rng.integers(length, size=n)
        out[rows, cols] = targets[rows, cols]
        return out
    mask = rng.random((n, length)) < rate
    return np.where(mask, targets, x).astype(np.uint8)


def _finish(out: np.ndarray, squeeze: bool) -> np.ndarray:
    return out[0] if squeeze else out


def follow_best(x, elites, rate: float, mode: str, rng) -> np.ndarray:
    """Copy genes from one elite "teacher" drawn uniformly from ``elites``.

    ``x`` may be one genome or a 2-D batch; each row gets its own teacher.
    """
    elites = _check_group(elites)
    _check_mode(mode)
    x, squeeze = _as_batch(x)
    teachers = elites[rng.integers(elites.shape[0], size=x.shape[0])]
    return _finish(_imitate(x, teachers, rate, mode, rng), squeeze)


def gene_spread(elites) -> np.ndarray:
    """Per-position population standard deviation across the elite genomes."""
    return _check_group(elites).astype(np.float64).std(axis=0)


def softmax(values) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    e = np.exp(v - v.max())
    return e / e.sum()


def position_weights(elites) -> np.ndarray:
    """Selection probability of each position: softmax of the gene spread."""
    return softmax(gene_spread(elites))


def subset_size(length: int, rate: float) -> int:
    """Number of positions follow_best_distinct rewrites in per-gene-rate mode.

    ``round(length * rate)`` with halves rounded up, and at least one
    position whenever ``rate > 0``.
    """
    if rate <= 0.0:
        return 0
    return min(length, max(1, math.floor(length * rate + 0.5)))


def select_positions(weights, size: int, rng, n: int = None) -> np.ndarray:
    """Draw ``size`` distinct positions proportional to ``weights``.

    Uses exponential race keys: the order in which positions win matches
    sequential weighted draws with renormalisation. With ``n`` given, returns
    an ``(n, size)`` array of independent draws.
    """
    weights = np.asarray(weights, dtype=np.float64)
    shape = (weights.shape[0],) if n is None else (n, weights.shape[0])
    with np.errstate(divide="ignore"):
        keys = rng.standard_exponential(shape) / weights
    return np.argsort(keys, axis=-1, kind="stable")[..., :size]


def follow_best_distinct(x, elites, rate: float, mode: str, rng) -> np.ndarray:
    """Rewrite the positions where the elites disagree most.

    Positions are sampled without replacement with probabilities given by
    :func:`position_weights`; each chosen position copies the gene of an
    elite drawn uniformly and independently for that position.
    """
    elites = _check_group(elites)
    _check_mode(mode)
    x, squeeze = _as_batch(x)
    n, length = x.shape
    size = 1 if mode == SINGLE_GENE else subset_size(length, rate)
    out = x.copy()
    if size == 0:
        return _finish(out, squeeze)
    positions = select_positions(position_weights(elites), size, rng, n=n)
    donors = rng.integers(elites.shape[0], size=(n, size))
    rows = np.arange(n)[:, None]
    out[rows, positions] = elites[donors, positions]
    return _finish(out, squeeze)


def repel_worst_gravity(x, worst, rate: float, mode: str, rng) -> np.ndarray:
    """Set genes to the complement of one "repeller" drawn uniformly from ``worst``."""
    worst = _check_group(worst)
    _check_mode(mode)
    x, squeeze = _as_batch(x)
    repellers = worst[rng.integers(worst.shape[0], size=x.shape[0])]
    return _finish(_imitate(x, 1 - repellers, rate, mode, rng), squeeze)


def repel_worst_gravity_multistep(x, worst, rate: float, mode: str, rng) -> np.ndarray:
    """Repel from every member of ``worst`` in turn, in row order."""
    worst = _check_group(worst)
    _check_mode(mode)
    out, squeeze = _as_batch(x)
    for repeller in worst:
        targets = np.broadcast_to(1 - repeller, out.shape)
        out = _imitate(out, targets, rate, mode, rng)
    return _finish(out, squeeze)


OPERATORS = {
    FOLLOW_BEST: follow_best,
    FOLLOW_BEST_DISTINCT: follow_best_distinct,
    REPEL_WORST: repel_worst_gravity,
    REPEL_WORST_MULTISTEP: repel_worst_gravity_multistep,
}


@dataclass(frozen=True)
class OperatorPipeline:
    """Ordered socio-cognitive stages applied to each mutated offspring.

    An empty pipeline is the base algorithm. At most one follow stage and one
    repel stage are allowed, follow first.
    """

    stages: tuple[str, ...] = ()
    rate: float = 0.5
    mode: str = PER_GENE
    group_size: int = 5

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        unknown = [s for s in self.stages if s not in OPERATORS]
        if unknown:
            raise ConfigurationError(f"unknown operator stage(s): {unknown}")
        follows = [s for s in self.stages if s in FOLLOW_STAGES]
        repels = [s for s in self.stages if s in REPEL_STAGES]
        if len(follows) > 1 or len(repels) > 1:
            raise ConfigurationError("at most one follow stage and one repel stage")
        if follows and repels and self.stages.index(follows[0]) > self.stages.index(repels[0]):
            raise ConfigurationError("follow stage must come before repel stage")
        if self.mode not in MUTATION_MODES:
            raise ConfigurationError(f"unknown mutation mode {self.mode!r}")
        try:
            check_probability(self.rate, "rate")
            check_count(self.group_size, "group_size")
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None

    @classmethod
    def for_variant(cls, variant: str, mode: str = "rate05", group_size: int = 5) -> "OperatorPipeline":
        """Build the pipeline for a variant id (``"fb+rwm"``) and mode id (``"rate05"``)."""
        if variant not in VARIANTS:
            raise ConfigurationError(f"unknown variant {variant!r}; expected one of {list(VARIANTS)}")
        if mode not in MODES:
            raise ConfigurationError(f"unknown mode {mode!r}; expected one of {list(MODES)}")
        mutation_mode, rate = MODES[mode]
        return cls(VARIANTS[variant], rate=rate, mode=mutation_mode, group_size=group_size)

    def check_population_size(self, population_size: int) -> None:
        if self.stages and self.group_size > population_size:
            raise ConfigurationError(
                f"group_size={self.group_size} exceeds population size {population_size}"
            )

    def groups(self, genomes, energies) -> tuple[np.ndarray, np.ndarray]:
        """Elite and worst groups of the current population."""
        return (
            elite_set(genomes, energies, self.group_size),
            worst_set(genomes, energies, self.group_size),
        )

    def apply(self, x, groups, rng) -> np.ndarray:
        """Run every stage on ``x`` (one genome or a batch) with precomputed groups."""
        elites, worst = groups
        out = np.asarray(x, dtype=np.uint8)
        for stage in self.stages:
            group = elites if stage in FOLLOW_STAGES else worst
            out = OPERATORS[stage](out, group, self.rate, self.mode, rng)
        return out


def apply_pipeline(x, genomes, energies, pipeline: OperatorPipeline, rng) -> np.ndarray:
    """Apply ``pipeline`` to ``x`` using groups drawn from an evaluated population."""
    pipeline.check_population_size(len(genomes))
    return pipeline.apply(x, pipeline.groups(genomes, energies), rng)
