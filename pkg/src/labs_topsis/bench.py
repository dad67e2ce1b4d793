"""Experiment harness: run the variant x mode x run grid, persist traces,
aggregate statistics and test each variant against the base algorithm.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .ga import GaParams, RunTrace, run
from .operators import MODES, VARIANTS, ConfigurationError, OperatorPipeline
from .stats import boxplot_stats, summarize, wilcoxon_rank_sum

log = logging.getLogger(__name__)

TRACE_HEADER = ("generation", "best_energy")


@dataclass(frozen=True)
class ExperimentConfig:
    length: int = 50
    variants: tuple = tuple(VARIANTS)
    modes: tuple = tuple(MODES)
    runs: int = 50
    population_size: int = 20
    offspring_count: int = 10
    crossover_rate: float = 0.5
    mutation_rate: float = 0.5
    mutation_gate: bool = False
    evaluation_budget: int = 10_000
    group_size: int = 5
    seed: int = 0
    out: Optional[str] = None
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "variants", tuple(self.variants))
        object.__setattr__(self, "modes", tuple(self.modes))
        for v in self.variants:
            if v not in VARIANTS:
                raise ConfigurationError(f"unknown variant {v!r}; expected one of {list(VARIANTS)}")
        for m in self.modes:
            if m not in MODES:
                raise ConfigurationError(f"unknown mode {m!r}; expected one of {list(MODES)}")
        if not self.variants or not self.modes:
            raise ConfigurationError("at least one variant and one mode are required")
        if self.runs < 1:
            raise ConfigurationError("runs must be >= 1")
        if self.length < 2:
            raise ConfigurationError("length must be >= 2")
        if self.jobs < 1:
            raise ConfigurationError("jobs must be >= 1")
        try:
            params = self.ga_params(0)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
        for v in self.variants:
            OperatorPipeline.for_variant(v, self.modes[0], self.group_size).check_population_size(
                params.population_size
            )

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path, **overrides) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["variants"] = list(self.variants)
        d["modes"] = list(self.modes)
        return d

    def ga_params(self, seed: int) -> GaParams:
        return GaParams(
            population_size=self.population_size,
            offspring_count=self.offspring_count,
            crossover_rate=self.crossover_rate,
            mutation_rate=self.mutation_rate,
            mutation_gate=self.mutation_gate,
            evaluation_budget=self.evaluation_budget,
            rng_seed=seed,
        )

    def cells(self) -> list[tuple[str, str, int]]:
        return [(v, m, r) for v in self.variants for m in self.modes for r in range(self.runs)]


def derive_seed(master: int, variant: str, mode: str, run_index: int) -> int:
    """Stable 64-bit seed for one (variant, mode, run) cell."""
    key = f"{master}|{variant}|{mode}|{run_index}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


def run_cell(config: ExperimentConfig, variant: str, mode: str, run_index: int) -> RunTrace:
    seed = derive_seed(config.seed, variant, mode, run_index)
    pipeline = OperatorPipeline.for_variant(variant, mode, config.group_size)
    trace = run(config.ga_params(seed), pipeline, config.length)
    trace.variant, trace.mode, trace.run_index = variant, mode, run_index
    return trace


def _run_cell_args(args) -> RunTrace:
    return run_cell(*args)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    summary: dict
    significance: dict
    best_found: dict
    traces: list

    def to_dict(self) -> dict:
        summary = [
            {"variant": v, "mode": m, **dataclasses.asdict(s)}
            for (v, m), s in self.summary.items()
        ]
        significance = [
            {
                "variant": v,
                "mode": m,
                "statistic": r.statistic,
                "p_value": r.p_value,
                "significant": r.significant,
                "method": r.method,
            }
            for (v, m), r in self.significance.items()
        ]
        best = [
            {"variant": v, "mode": m, "energy": e} for (v, m), e in self.best_found.items()
        ]
        # Execution settings stay out so reports compare byte-for-byte.
        config = {k: v for k, v in self.config.to_dict().items() if k not in ("out", "jobs")}
        return {
            "config": config,
            "summary": summary,
            "significance": significance,
            "best_found": best,
            "notes": {
                "trace_axis": "generation",
                "evaluations_at_generation_0": self.config.population_size,
                "evaluations_per_generation": self.config.offspring_count,
                "significance_reference": "base variant in the same mode",
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def final_energies(self, variant: str, mode: str) -> list[int]:
        return [t.final_energy for t in self.traces if t.variant == variant and t.mode == mode]


def trace_filename(variant: str, mode: str, run_index: int) -> str:
    return f"{variant}_{mode}_run{run_index:03d}.csv"


def format_trace(trace: RunTrace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    for generation, best in enumerate(trace.best_energies):
        writer.writerow((generation, best))
    writer.writerow(("genome", "".join(str(int(g)) for g in trace.best_genome)))
    return buf.getvalue()


def read_trace(path) -> tuple[list[int], np.ndarray]:
    """Parse a trace file into (best energy per generation, final genome)."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != TRACE_HEADER or rows[-1][0] != "genome":
        raise ValueError(f"{path}: not a trace file")
    energies = [int(r[1]) for r in rows[1:-1]]
    genome = np.array([int(c) for c in rows[-1][1]], dtype=np.uint8)
    return energies, genome


def emit_mean_trace(traces: Sequence[RunTrace], variant: str, mode: str) -> list[tuple[int, float]]:
    """Mean best energy per generation across the runs of one cell."""
    selected = [t.best_energies for t in traces if t.variant == variant and t.mode == mode]
    if not selected:
        raise ValueError(f"no traces for {variant}/{mode}")
    lengths = {len(s) for s in selected}
    if len(lengths) != 1:
        raise ValueError(f"traces for {variant}/{mode} differ in length: {sorted(lengths)}")
    totals = np.asarray(selected, dtype=np.int64).sum(axis=0)
    return [(g, int(total) / len(selected)) for g, total in enumerate(totals)]


def emit_boxplot_data(samples: dict) -> list[dict]:
    """One row per key of ``samples``: five numbers, whiskers and outliers."""
    if not samples:
        raise ValueError("no samples given")
    rows = []
    for key, values in samples.items():
        b = boxplot_stats(values)
        rows.append({"key": key, **dataclasses.asdict(b)})
    return rows


def _check_writable(out: Path) -> None:
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("", encoding="utf-8")
        probe.unlink()
    except OSError as exc:
        raise OSError(f"output directory {out} is not writable: {exc}") from exc


def build_report(config: ExperimentConfig, traces: list[RunTrace]) -> ExperimentReport:
    summary, significance, best = {}, {}, {}
    for v in config.variants:
        for m in config.modes:
            finals = [t.final_energy for t in traces if t.variant == v and t.mode == m]
            summary[(v, m)] = summarize(finals)
            best[(v, m)] = min(finals)
    if "base" in config.variants:
        for v in config.variants:
            if v == "base":
                continue
            for m in config.modes:
                significance[(v, m)] = wilcoxon_rank_sum(
                    [t.final_energy for t in traces if t.variant == v and t.mode == m],
                    [t.final_energy for t in traces if t.variant == "base" and t.mode == m],
                )
    return ExperimentReport(config, summary, significance, best, traces)


def write_outputs(report: ExperimentReport, out) -> None:
    out = Path(out)
    traces_dir = out / "traces"
    means_dir = out / "mean_traces"
    traces_dir.mkdir(parents=True, exist_ok=True)
    means_dir.mkdir(parents=True, exist_ok=True)
    for t in report.traces:
        (traces_dir / trace_filename(t.variant, t.mode, t.run_index)).write_text(
            format_trace(t), encoding="utf-8"
        )
    cfg = report.config
    for v in cfg.variants:
        for m in cfg.modes:
            rows = emit_mean_trace(report.traces, v, m)
            lines = ["generation,mean_best_energy"] + [f"{g},{e!r}" for g, e in rows]
            (means_dir / f"{v}_{m}.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    box = emit_boxplot_data(
        {(v, m): report.final_energies(v, m) for v in cfg.variants for m in cfg.modes}
    )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["variant", "mode", "min", "q1", "median", "q3", "max", "lower_whisker", "upper_whisker", "outliers"]
    )
    for row in box:
        v, m = row["key"]
        writer.writerow(
            [v, m] + [repr(row[k]) for k in ("min", "q1", "median", "q3", "max", "lower_whisker", "upper_whisker")]
            + [" ".join(repr(o) for o in row["outliers"])]
        )
    (out / "boxplot.csv").write_text(buf.getvalue(), encoding="utf-8")
    (out / "report.json").write_text(report.to_json(), encoding="utf-8")


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run every (variant, mode, run) cell and aggregate the results.

    Output files are written only after all runs finish, from this process,
    so their content does not depend on ``config.jobs``.
    """
    if config.out is not None:
        _check_writable(Path(config.out))
    cells = config.cells()
    log.info("running %d cells with %d job(s)", len(cells), config.jobs)
    args = [(config, v, m, r) for v, m, r in cells]
    if config.jobs == 1:
        traces = [_run_cell_args(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            traces = list(pool.map(_run_cell_args, args, chunksize=max(1, len(args) // (4 * config.jobs))))
    report = build_report(config, traces)
    if config.out is not None:
        write_outputs(report, config.out)
    return report
