import json

import yaml

from eurohoops.cli import main


def args(files, *extra):
    return ["--results", str(files["results"]), "--f4", str(files["f4"]), *extra]


def test_validate_ok(data_files, capsys):
    assert main(["validate", *args(data_files)]) == 0


def test_validate_duplicate(data_files, tmp_path):
    text = data_files["results"].read_text().splitlines()
    bad = tmp_path / "dup.csv"
    bad.write_text("\n".join(text + [text[1]]) + "\n")
    assert main(["validate", "--results", str(bad)]) != 0


def test_missing_file(tmp_path, capsys):
    assert main(["validate", "--results", str(tmp_path / "nope.csv")]) == 1
    assert "nope.csv" in capsys.readouterr().err


def test_usage_errors(data_files, tmp_path):
    assert main(["select-features", "--method", "magic", *args(data_files)]) == 2
    assert main(["backtest", "--model", "modle1", *args(data_files)]) == 2
    assert main(["describe"]) == 2


def test_describe_creates_outputs(data_files, tmp_path):
    out = tmp_path / "new" / "dir"
    assert main(["describe", *args(data_files), "--out", str(out)]) == 0
    rows = (out / "season_summary.csv").read_text().splitlines()
    assert len(rows) == 1 + 3
    assert (out / "manifest.json").exists() and (out / "resolved_config.yaml").exists()


def test_calibrate_two_algorithms(data_files, tmp_path):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text(yaml.safe_dump({"algorithms": ["KNN", "LR"],
                                   "grids": {"KNN": {"k": [3, 5]}, "LR": {"C": [1.0]}}}))
    out = tmp_path / "out"
    assert main(["calibrate", *args(data_files), "--config", str(cfg), "--out", str(out)]) == 0
    best = (out / "calibration_match_best.csv").read_text().splitlines()
    assert [r.split(",")[0] for r in best[1:]] == ["KNN", "LR"]
    assert (out / "calibration_match_KNN.csv").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 0 and "results" in manifest["inputs"]
    assert main(["calibrate", *args(data_files), "--config", str(cfg), "--level", "team",
                 "--out", str(out)]) == 0
    assert (out / "calibration_team_best.csv").exists()


def test_select_features_pca(data_files, tmp_path):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text(yaml.safe_dump({"selection": {"algorithm": "KNN", "params": {"k": 5}},
                                   "grids": {"KNN": {"k": [5]}}}))
    out = tmp_path / "out"
    assert main(["select-features", "--method", "pca", *args(data_files), "--config", str(cfg),
                 "--out", str(out)]) == 0
    assert len((out / "pca_sweep.csv").read_text().splitlines()) == 1 + 12


def test_backtest_benchmarks_and_crowd(data_files, tmp_path):
    out = tmp_path / "out"
    for m in ("bench1", "bench2", "bench3"):
        assert main(["backtest", "--model", m, *args(data_files), "--out", str(out)]) == 0
    assert main(["backtest", "--model", "crowd", *args(data_files), "--crowd",
                 str(data_files["crowd"]), "--exclude-rounds", "26", "--out", str(out)]) == 0
    summary = (out / "backtest_summary.csv").read_text().splitlines()
    assert [r.split(",")[0] for r in summary[1:]] == ["bench1", "bench2", "bench3", "crowd"]
    assert len((out / "backtest_bench1.csv").read_text().splitlines()) == 1 + 29
    assert len((out / "crowd_backtest.csv").read_text().splitlines()) == 1 + 28


def test_crowd_without_file(data_files, tmp_path):
    assert main(["backtest", "--model", "crowd", *args(data_files), "--out", str(tmp_path)]) == 2
