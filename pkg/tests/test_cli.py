import json

import pytest

from vpd.cli import main
from vpd.training import LossSpec, TrainConfig


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """generate -> train -> evaluate on one small corpus, shared across tests."""
    root = tmp_path_factory.mktemp("cli")
    data = root / "data"
    assert main(["generate", "--preset", "noiseless", "--n-files", "8",
                 "--seed", "3", "--out", str(data)]) == 0

    config = root / "harness.json"
    config.write_text(json.dumps({
        "train": TrainConfig(epochs=6, loss=LossSpec(2.0, 1.0, 0.05),
                             threshold_grid=0.05).to_dict(),
        "window": 4,
        "test_fraction": 0.25,
        "final_hidden": 6,
        "final_dense": 4,
    }))
    checkpoint = root / "model.json"
    assert main(["train", "--config", str(config), "--data", str(data),
                 "--model", "final", "--out", str(checkpoint)]) == 0
    return {"root": root, "data": data, "config": config, "checkpoint": checkpoint}


class TestGenerate:
    def test_writes_logs_and_manifest(self, workspace):
        data = workspace["data"]
        csvs = sorted(data.glob("*.csv"))
        assert len(csvs) == 8
        manifest = json.loads((data / "manifest.json").read_text())
        assert manifest["config"]["n_files"] == 8
        assert manifest["config"]["seed"] == 3
        assert set(manifest["files"]) == {p.stem for p in csvs}
        for intervals in manifest["files"].values():
            assert all(a <= b for a, b in intervals)

    def test_log_header(self, workspace):
        first = sorted(workspace["data"].glob("*.csv"))[0]
        assert first.read_text().splitlines()[0] == "frame,shield,loop,cor,basic,ref"

    def test_config_file_round_trip(self, tmp_path):
        cfg_path = tmp_path / "synth.json"
        cfg_path.write_text(json.dumps({"n_files": 2, "seed": 9}))
        out = tmp_path / "corpus"
        assert main(["generate", "--config", str(cfg_path), "--out", str(out)]) == 0
        assert len(list(out.glob("*.csv"))) == 2


class TestTrain:
    def test_checkpoint_metadata(self, workspace):
        meta = json.loads(workspace["checkpoint"].read_text())
        assert meta["variant"] == "final"
        assert 0.0 < meta["threshold"] < 1.0
        assert meta["features"]["channels"] == ["shield", "loop", "cor"]
        assert meta["morph"] is not None
        assert meta["train_pq"] > 0.9

    def test_lr_uses_window(self, workspace, tmp_path):
        out = tmp_path / "lr.json"
        assert main(["train", "--config", str(workspace["config"]),
                     "--data", str(workspace["data"]), "--model", "lr",
                     "--window", "2", "--out", str(out)]) == 0
        meta = json.loads(out.read_text())
        assert meta["features"]["window"] == 2


class TestEvaluate:
    def test_report_json(self, workspace, capsys):
        assert main(["evaluate", "--model", str(workspace["checkpoint"]),
                     "--data", str(workspace["data"])]) == 0
        report = json.loads(capsys.readouterr().out)
        assert set(report) >= {"r", "sum_err", "pq", "counts"}
        assert report["pq"] > 0.9

    def test_threshold_and_morph_overrides(self, workspace, capsys):
        assert main(["evaluate", "--model", str(workspace["checkpoint"]),
                     "--data", str(workspace["data"]),
                     "--threshold", "0.5", "--morph", "none"]) == 0
        json.loads(capsys.readouterr().out)

    def test_missing_data_dir(self, workspace, tmp_path):
        with pytest.raises(SystemExit):
            main(["evaluate", "--model", str(workspace["checkpoint"]),
                  "--data", str(tmp_path / "empty")])


class TestScore:
    def test_basic_channel_against_reference(self, workspace, capsys):
        log = sorted(workspace["data"].glob("*.csv"))[0]
        assert main(["score", "--pred", str(log), "--ref", str(log)]) == 0
        report = json.loads(capsys.readouterr().out)
        # the noiseless rule-based channel equals the reference
        assert report["pq"] == 1.0
        assert report["counts"]["correct"] == report["r"]


class TestCompareAndAblate:
    def test_compare_writes_artifacts(self, workspace, tmp_path, capsys):
        out = tmp_path / "cmp"
        assert main(["compare", "--config", str(workspace["config"]),
                     "--data", str(workspace["data"]), "--out", str(out)]) == 0
        rows = json.loads((out / "comparison.json").read_text())
        assert [r["model"] for r in rows] == ["basic", "lr", "mlp", "simplernn",
                                              "lstm", "gru", "final"]
        table = (out / "comparison.txt").read_text()
        assert table.splitlines()[0].startswith("Model")

    def test_ablate_writes_seven_rows(self, workspace, tmp_path):
        out = tmp_path / "abl"
        assert main(["ablate", "--config", str(workspace["config"]),
                     "--data", str(workspace["data"]), "--out", str(out)]) == 0
        rows = json.loads((out / "ablation.json").read_text())
        assert len(rows) == 7
        assert rows[-1]["channels"] == ["shield", "loop", "cor"]


class TestParser:
    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            main(["frobnicate"])

    def test_missing_required_argument(self):
        with pytest.raises(SystemExit):
            main(["train", "--data", "somewhere"])
