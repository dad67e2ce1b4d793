"""Elitist genetic algorithm over 0/1 genomes minimising LABS energy.

One generation: pair the current best with uniformly drawn mates, apply
single-point crossover with probability ``crossover_rate`` per pair, bit-flip
mutation to every child, then the optional socio-cognitive pipeline, and keep
the ``population_size`` lowest-energy members of parents plus children.
Initial evaluations count against the evaluation budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .labs import batch_energy
from .operators import MUTATION_MODES, PER_GENE, SINGLE_GENE, OperatorPipeline
from .validation import check_count, check_genome, check_probability


class BudgetExhausted(Exception):
    """The evaluation budget cannot pay for another generation."""


@dataclass(frozen=True)
class GaParams:
    population_size: int = 20
    offspring_count: int = 10
    crossover_rate: float = 0.5
    mutation_rate: float = 0.5
    mutation_mode: str = PER_GENE
    # When True, each child is mutated with probability ``mutation_rate`` by
    # flipping one uniformly chosen gene, instead of the per-gene rule.
    mutation_gate: bool = False
    evaluation_budget: int = 10_000
    rng_seed: int = 0

    def __post_init__(self):
        check_count(self.population_size, "population_size", 2)
        check_count(self.offspring_count, "offspring_count", 2)
        if self.offspring_count % 2:
            raise ValueError("offspring_count must be even")
        check_probability(self.crossover_rate, "crossover_rate")
        check_probability(self.mutation_rate, "mutation_rate")
        if self.mutation_mode not in MUTATION_MODES:
            raise ValueError(f"mutation_mode must be one of {MUTATION_MODES}")
        check_count(self.evaluation_budget, "evaluation_budget", self.population_size)


@dataclass
class Individual:
    genome: np.ndarray
    energy: Optional[int] = None


@dataclass
class Population:
    """Evaluated population stored column-wise: one genome row per member."""

    genomes: np.ndarray
    energies: np.ndarray

    def __len__(self) -> int:
        return self.genomes.shape[0]

    @property
    def members(self) -> list[Individual]:
        return [Individual(g.copy(), int(e)) for g, e in zip(self.genomes, self.energies)]

    @classmethod
    def from_individuals(cls, individuals) -> "Population":
        individuals = list(individuals)
        if any(ind.energy is None for ind in individuals):
            raise ValueError("all members must be evaluated")
        genomes = np.array([check_genome(ind.genome) for ind in individuals], dtype=np.uint8)
        energies = np.array([ind.energy for ind in individuals], dtype=np.int64)
        return cls(genomes, energies)


@dataclass
class EvaluationCounter:
    budget: int
    consumed: int = 0

    def can_afford(self, n: int) -> bool:
        return self.consumed + n <= self.budget

    def charge(self, n: int) -> None:
        self.consumed += n


@dataclass
class RunTrace:
    """Best energy per generation (generation 0 is the initial population)."""

    best_energies: list[int]
    best_genome: np.ndarray
    evaluations: int
    seed: Optional[int] = None
    variant: Optional[str] = None
    mode: Optional[str] = None
    run_index: Optional[int] = None
    extra: dict = field(default_factory=dict)

    @property
    def final_energy(self) -> int:
        return self.best_energies[-1]

    @property
    def generations(self) -> int:
        return len(self.best_energies) - 1


def initialize_population(
    params: GaParams, length: int, rng, counter: Optional[EvaluationCounter] = None
) -> Population:
    """Uniformly random genomes, evaluated; charges ``population_size`` evaluations."""
    check_count(length, "length", 2)
    genomes = rng.integers(0, 2, size=(params.population_size, length), dtype=np.uint8)
    if counter is not None:
        counter.charge(params.population_size)
    return Population(genomes, batch_energy(genomes))


def select_best(pop: Population) -> Individual:
    """Lowest-energy member; ties go to the lowest index."""
    if len(pop) == 0:
        raise ValueError("cannot select from an empty population")
    i = int(np.argmin(pop.energies))
    return Individual(pop.genomes[i].copy(), int(pop.energies[i]))


def _swap_tails(p1: np.ndarray, p2: np.ndarray, cuts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Row-wise: genes before cuts[r] come from p1[r], the rest from p2[r].
    head = np.arange(p1.shape[-1]) < cuts[..., None]
    return np.where(head, p1, p2), np.where(head, p2, p1)


def single_point_crossover(p1, p2, rng, cut: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
    """Swap tails after a cut drawn uniformly from ``1..L-1`` (or given as ``cut``)."""
    p1 = check_genome(p1)
    p2 = check_genome(p2)
    if p1.shape != p2.shape:
        raise ValueError(f"parents differ in length: {p1.shape[0]} vs {p2.shape[0]}")
    n = p1.shape[0]
    c = int(rng.integers(1, n)) if cut is None else cut
    if not 1 <= c <= n - 1:
        raise ValueError(f"cut must be in 1..{n - 1}")
    return _swap_tails(p1, p2, np.asarray(c))


def bit_flip_mutation(genome, params: GaParams, rng) -> np.ndarray:
    """Complement genes of a copy of ``genome`` (one genome or a 2-D batch)."""
    x = np.asarray(genome, dtype=np.uint8)
    batch = np.atleast_2d(x)
    n, length = batch.shape
    if params.mutation_gate or params.mutation_mode == SINGLE_GENE:
        flips = np.zeros_like(batch)
        hit = np.ones(n, dtype=bool)
        if params.mutation_gate:
            hit = rng.random(n) < params.mutation_rate
        flips[np.arange(n)[hit], rng.integers(length, size=n)[hit]] = 1
    else:
        flips = (rng.random((n, length)) < params.mutation_rate).astype(np.uint8)
    out = batch ^ flips
    return out[0] if x.ndim == 1 else out


def make_offspring(pop: Population, params: GaParams, pipeline: OperatorPipeline, rng) -> np.ndarray:
    """Children of one generation, before evaluation.

    Pair ``r`` yields children ``2r`` and ``2r + 1``.
    """
    n, length = pop.genomes.shape
    pairs = params.offspring_count // 2
    p1 = np.broadcast_to(pop.genomes[int(np.argmin(pop.energies))], (pairs, length))
    p2 = pop.genomes[rng.integers(n, size=pairs)]
    crossed = rng.random(pairs) < params.crossover_rate
    cuts = np.where(crossed, rng.integers(1, length, size=pairs), length)
    o1, o2 = _swap_tails(p1, p2, cuts)
    children = np.stack([o1, o2], axis=1).reshape(2 * pairs, length)
    children = bit_flip_mutation(children, params, rng)
    if pipeline.stages:
        children = pipeline.apply(children, pipeline.groups(pop.genomes, pop.energies), rng)
    return children


def run_generation(
    pop: Population,
    params: GaParams,
    pipeline: OperatorPipeline,
    counter: EvaluationCounter,
    rng,
) -> Population:
    """One generation with (N + lambda) elitist truncation."""
    if not counter.can_afford(params.offspring_count):
        raise BudgetExhausted(f"{counter.consumed} of {counter.budget} evaluations used")
    children = make_offspring(pop, params, pipeline, rng)
    child_energies = batch_energy(children)
    counter.charge(len(children))

    genomes = np.concatenate([pop.genomes, children])
    energies = np.concatenate([pop.energies, child_energies])
    # Stable sort keeps parents ahead of equally fit children.
    keep = np.argsort(energies, kind="stable")[: params.population_size]
    return Population(genomes[keep], energies[keep])


def run(params: GaParams, pipeline: Optional[OperatorPipeline], length: int) -> RunTrace:
    """Evolve until the budget cannot pay for another generation."""
    pipeline = pipeline if pipeline is not None else OperatorPipeline()
    pipeline.check_population_size(params.population_size)
    rng = np.random.default_rng(params.rng_seed)
    counter = EvaluationCounter(params.evaluation_budget)
    pop = initialize_population(params, length, rng, counter)
    trace = [int(pop.energies.min())]
    while counter.can_afford(params.offspring_count):
        pop = run_generation(pop, params, pipeline, counter, rng)
        trace.append(int(pop.energies[0]))
    best = select_best(pop)
    return RunTrace(trace, best.genome, counter.consumed, seed=params.rng_seed)
