import json

from labs_topsis.cli import main


def test_cli_runs_single_cell(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["--variant", "base", "--variant", "rwm", "--mode", "single", "--runs", "2",
                 "--length", "10", "--budget", "120", "--seed", "9", "--k", "3", "--out", str(out)])
    assert code == 0
    doc = json.loads((out / "report.json").read_text())
    assert doc["config"]["group_size"] == 3
    assert doc["config"]["variants"] == ["base", "rwm"]
    assert [r["variant"] for r in doc["significance"]] == ["rwm"]
    assert "rwm" in capsys.readouterr().out


def test_cli_flags_override_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"length": 8, "runs": 5, "evaluation_budget": 60, "variants": ["base"], "modes": ["rate05"]}))
    out = tmp_path / "out"
    assert main([str(cfg), "--runs", "1", "--out", str(out)]) == 0
    doc = json.loads((out / "report.json").read_text())
    assert doc["config"]["runs"] == 1 and doc["config"]["length"] == 8


def test_cli_config_errors(tmp_path, capsys):
    assert main(["--runs", "0"]) == 2
    assert "configuration error" in capsys.readouterr().err
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"variants": ["nope"]}))
    assert main([str(cfg)]) == 2
    assert main([str(tmp_path / "missing.json")]) == 1


def test_cli_unwritable_output(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code = main(["--variant", "base", "--mode", "rate05", "--runs", "1", "--length", "6",
                 "--budget", "40", "--out", str(blocker / "out")])
    assert code == 1
    assert "not writable" in capsys.readouterr().err
