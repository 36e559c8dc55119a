"""
tests/test_main.py
"""
import json

import pandas as pd
import pytest

from main import main

SMALL = ["--set", "data.synthetic.n_rows=80", "--set", "model.depth=1", "--set", "training.finetune_epochs=1"]


@pytest.fixture(scope="module")
def trained(tmp_path_factory):
    out = tmp_path_factory.mktemp("train")
    code = main(["train", *SMALL, "--seed", "1", "--output-dir", str(out),
                 "--pin-golden", str(out / "golden.json")])
    assert code == 0
    return out


class TestCommands:

    def test_synth(self, tmp_path):
        path = tmp_path / "synthetic.csv"
        assert main(["synth", "--out", str(path), "--rows", "50"]) == 0
        frame = pd.read_csv(path)
        assert len(frame) == 50 and "__split__" in frame.columns

    def test_train_outputs(self, trained):
        for name in ("result.json", "checkpoint.json", "oversmoothing.json"):
            assert (trained / name).exists()
        golden = json.loads((trained / "golden.json").read_text())
        assert golden["metric"] == "auroc" and golden["tolerance"] == 0.02 and golden["seed"] == 1

    def test_diagnose(self, trained, tmp_path):
        out = tmp_path / "report.json"
        code = main(["diagnose", *SMALL, "--checkpoint", str(trained / "checkpoint.json"),
                     "--rows", "8", "--out", str(out)])
        assert code == 0
        assert out.exists() and out.with_suffix(".csv").exists()

    def test_convergence(self, trained, tmp_path):
        out = tmp_path / "convergence.json"
        code = main(["convergence", *SMALL, "--checkpoint", str(trained / "checkpoint.json"),
                     "--steps", "20", "--eps", "0.15", "--out", str(out)])
        assert code == 0
        assert set(json.loads(out.read_text())["pagerank"]) == {"0.15"}

    def test_gradcheck(self, tmp_path):
        out = tmp_path / "audit.json"
        assert main(["gradcheck", *SMALL, "--rows", "2", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["passed"] is True

    def test_baseline(self, tmp_path):
        out = tmp_path / "baselines.json"
        assert main(["baseline", *SMALL, "--model", "linear", "--out", str(out)]) == 0
        assert json.loads(out.read_text())[0]["model_type"] == "linear"

    def test_sweep(self, tmp_path):
        code = main(["sweep", *SMALL, "--axis", "order", "--values", "2,3", "--seeds", "1",
                     "--output-dir", str(tmp_path)])
        assert code == 0
        assert len(pd.read_csv(tmp_path / "sweep.csv")) == 2


class TestExitCodes:

    def test_malformed_set(self):
        assert main(["train", "--set", "model.order"]) == 14

    def test_missing_config(self, tmp_path):
        assert main(["train", "--config", str(tmp_path / "absent.json")]) == 14

    def test_invalid_model(self, tmp_path):
        assert main(["train", *SMALL, "--set", "model.basis=hermite", "--output-dir", str(tmp_path)]) == 14

    def test_missing_checkpoint(self, tmp_path):
        code = main(["diagnose", "--checkpoint", str(tmp_path / "none.json"), "--out", str(tmp_path / "r.json")])
        assert code == 13
