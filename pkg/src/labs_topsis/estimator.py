"""scikit-learn style wrapper around a single GA run."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils import check_random_state
from sklearn.utils.validation import check_is_fitted

from .ga import GaParams, run
from .labs import batch_energy
from .operators import OperatorPipeline
from .validation import check_count, check_genomes


class LabsOptimizer(BaseEstimator):
    """Search for a low-energy binary sequence with the elitist GA.

    Parameters mirror :class:`~labs_topsis.ga.GaParams` plus the variant and
    mode ids of the socio-cognitive pipeline. ``fit`` ignores ``X``; it runs
    one search and stores the result.

    Attributes
    ----------
    best_genome_ : ndarray of shape (length,)
    best_energy_ : int
    energy_trace_ : ndarray, best energy per generation (generation 0 first)
    n_evaluations_ : int
    n_generations_ : int
    """

    def __init__(
        self,
        length=50,
        variant="base",
        mode="rate05",
        group_size=5,
        population_size=20,
        offspring_count=10,
        crossover_rate=0.5,
        mutation_rate=0.5,
        mutation_gate=False,
        evaluation_budget=10_000,
        random_state=None,
    ):
        self.length = length
        self.variant = variant
        self.mode = mode
        self.group_size = group_size
        self.population_size = population_size
        self.offspring_count = offspring_count
        self.crossover_rate = crossover_rate
        self.mutation_rate = mutation_rate
        self.mutation_gate = mutation_gate
        self.evaluation_budget = evaluation_budget
        self.random_state = random_state

    def fit(self, X=None, y=None):
        check_count(self.length, "length", 2)
        seed = int(check_random_state(self.random_state).randint(np.iinfo(np.int32).max))
        params = GaParams(
            population_size=self.population_size,
            offspring_count=self.offspring_count,
            crossover_rate=self.crossover_rate,
            mutation_rate=self.mutation_rate,
            mutation_gate=self.mutation_gate,
            evaluation_budget=self.evaluation_budget,
            rng_seed=seed,
        )
        pipeline = OperatorPipeline.for_variant(self.variant, self.mode, self.group_size)
        trace = run(params, pipeline, self.length)
        self.best_genome_ = trace.best_genome
        self.best_energy_ = trace.final_energy
        self.energy_trace_ = np.asarray(trace.best_energies, dtype=np.int64)
        self.n_evaluations_ = trace.evaluations
        self.n_generations_ = trace.generations
        return self

    def predict(self, X):
        """Energy of each row of ``X`` (0/1 genomes of the fitted length)."""
        check_is_fitted(self, "best_genome_")
        X = check_genomes(X)
        if X.shape[1] != self.length:
            raise ValueError(f"X has {X.shape[1]} genes per row; expected {self.length}")
        return batch_energy(X)

    def score(self, X, y=None):
        """Negative mean energy of ``X``; higher is better."""
        return -float(self.predict(X).mean())
