"""Socio-cognitive (TOPSIS-like) mutation operators for a GA on the LABS problem."""

from .bench import ExperimentConfig, ExperimentReport, run_experiment
from .estimator import LabsOptimizer
from .ga import GaParams, RunTrace, run
from .labs import autocorrelation, energy, energy_after_flip, exhaustive_optimum
from .operators import MODES, VARIANTS, OperatorPipeline
from .stats import summarize, wilcoxon_rank_sum

__all__ = [
    "ExperimentConfig",
    "ExperimentReport",
    "GaParams",
    "LabsOptimizer",
    "MODES",
    "OperatorPipeline",
    "RunTrace",
    "VARIANTS",
    "autocorrelation",
    "energy",
    "energy_after_flip",
    "exhaustive_optimum",
    "run",
    "run_experiment",
    "summarize",
    "wilcoxon_rank_sum",
]

__version__ = "0.1.0"
