import json

import numpy as np
import pytest

from labs_topsis.bench import (
    ExperimentConfig,
    derive_seed,
    emit_boxplot_data,
    emit_mean_trace,
    read_trace,
    run_experiment,
    trace_filename,
)
from labs_topsis.ga import RunTrace
from labs_topsis.labs import energy, exhaustive_optimum
from labs_topsis.operators import ConfigurationError


def small_config(tmp_path, **kw):
    base = dict(length=12, runs=3, evaluation_budget=200, out=str(tmp_path), seed=4)
    base.update(kw)
    return ExperimentConfig(**base)


def _trace(energies, variant="base", mode="rate05"):
    return RunTrace(list(energies), np.zeros(4, dtype=np.uint8), 0, variant=variant, mode=mode)


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(0, "base", "rate05", 0) == derive_seed(0, "base", "rate05", 0)
    seeds = {derive_seed(0, v, m, r) for v in ("base", "rwm") for m in ("rate05", "single") for r in range(20)}
    assert len(seeds) == 80
    assert all(0 <= s < 2**64 for s in seeds)


def test_config_validation(tmp_path):
    with pytest.raises(ConfigurationError, match="fbx"):
        ExperimentConfig(variants=("base", "fbx"))
    with pytest.raises(ConfigurationError):
        ExperimentConfig(modes=("half",))
    with pytest.raises(ConfigurationError):
        ExperimentConfig(runs=0)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(group_size=30)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(offspring_count=3)
    with pytest.raises(ConfigurationError, match="unknown config keys"):
        ExperimentConfig.from_dict({"lenght": 10})


def test_config_file_with_overrides(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"length": 20, "runs": 7, "variants": ["base", "fb"]}))
    cfg = ExperimentConfig.from_file(path, runs=2, seed=None)
    assert (cfg.length, cfg.runs, cfg.variants) == (20, 2, ("base", "fb"))


def test_full_grid_shape_and_files(tmp_path):
    cfg = small_config(tmp_path, runs=2)
    report = run_experiment(cfg)
    assert len(report.summary) == 18
    assert len(report.significance) == 16
    assert all(v != "base" for v, _ in report.significance)
    doc = json.loads((tmp_path / "report.json").read_text())
    assert set(doc) >= {"config", "summary", "significance"}
    assert set(doc["summary"][0]) >= {"variant", "mode", "mean", "sd", "min", "q1", "median", "q3", "max"}
    assert set(doc["significance"][0]) >= {"variant", "mode", "statistic", "p_value", "significant"}
    assert len(list((tmp_path / "traces").iterdir())) == 36
    assert len(list((tmp_path / "mean_traces").iterdir())) == 18
    assert (tmp_path / "boxplot.csv").read_text().count("\n") == 19


def test_traces_are_consistent_with_report(tmp_path):
    cfg = small_config(tmp_path, variants=("base", "rwm", "fbd+rw"))
    report = run_experiment(cfg)
    optimum = exhaustive_optimum(cfg.length)[0]
    doc = json.loads((tmp_path / "report.json").read_text())
    for row in doc["summary"]:
        finals = []
        for r in range(cfg.runs):
            energies, genome = read_trace(tmp_path / "traces" / trace_filename(row["variant"], row["mode"], r))
            assert energies[-1] == energy(genome)
            assert all(a >= b for a, b in zip(energies, energies[1:]))
            assert energies[-1] >= optimum
            finals.append(energies[-1])
        assert row["mean"] == sum(finals) / len(finals)
        assert row["min"] == min(finals)
    for (v, m), s in report.summary.items():
        assert emit_mean_trace(report.traces, v, m)[-1][1] == s.mean


def test_trace_file_format(tmp_path):
    run_experiment(small_config(tmp_path, variants=("base",), modes=("rate05",), runs=1))
    lines = (tmp_path / "traces" / "base_rate05_run000.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "generation,best_energy"
    assert lines[1].startswith("0,")
    assert len(lines) == 2 + 1 + (200 - 20) // 10
    tag, bits = lines[-1].split(",")
    assert tag == "genome" and len(bits) == 12 and set(bits) <= {"0", "1"}


def test_reruns_are_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run_experiment(small_config(a, variants=("base",), runs=2))
    run_experiment(small_config(b, variants=("base",), runs=2, jobs=2))
    files_a = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    files_b = sorted(p.relative_to(b) for p in b.rglob("*") if p.is_file())
    assert files_a == files_b
    for rel in files_a:
        assert (a / rel).read_bytes() == (b / rel).read_bytes()


def test_unwritable_output_fails_before_running(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError):
        run_experiment(small_config(blocker / "sub"))


def test_no_base_means_no_significance(tmp_path):
    report = run_experiment(small_config(tmp_path, variants=("fb", "rw"), runs=2))
    assert report.significance == {}


def test_emit_mean_trace():
    assert emit_mean_trace([_trace([9, 5, 4])], "base", "rate05") == [(0, 9.0), (1, 5.0), (2, 4.0)]
    both = [_trace([400] * 5), _trace([500] * 5)]
    assert [e for _, e in emit_mean_trace(both, "base", "rate05")] == [450.0] * 5
    with pytest.raises(ValueError, match="differ"):
        emit_mean_trace([_trace([3, 2]), _trace([3, 2, 1])], "base", "rate05")
    with pytest.raises(ValueError):
        emit_mean_trace(both, "rwm", "rate05")


def test_emit_boxplot_data():
    rows = emit_boxplot_data({"a": list(range(1, 101)), "b": [4] * 5, "c": [1, 2, 3, 4, 5, 6, 90]})
    assert (rows[0]["q1"], rows[0]["median"], rows[0]["q3"]) == (25.75, 50.5, 75.25)
    assert rows[1]["outliers"] == () and rows[1]["min"] == rows[1]["max"] == 4
    assert rows[2]["outliers"] == (90.0,)
    with pytest.raises(ValueError):
        emit_boxplot_data({})
