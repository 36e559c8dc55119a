"""
tests/test_storage.py
"""
import json

import numpy as np
import pytest

from errors import ConfigError, DataError
from nn import TabularModel
from storage import (
    STATUS_FAILED,
    ExperimentResult,
    RunTiming,
    checkpoint_from_dict,
    checkpoint_to_dict,
    load_checkpoint,
    make_json_safe,
    save_checkpoint,
)


class TestCheckpoint:

    def test_round_trip_is_exact(self, tiny_model_config, small_dataset, tmp_path):
        model = TabularModel(tiny_model_config)
        model.params["layer1.cheatt.alpha"] = np.array([0.1, -1 / 3, np.pi, 1e-300])
        path = save_checkpoint(model, tmp_path / "ckpt" / "model.json", metadata={"seed": np.int64(3)})

        loaded, metadata = load_checkpoint(path)
        assert loaded.config == model.config
        assert metadata == {"seed": 3}
        assert set(loaded.params) == set(model.params)
        for name, value in model.params.items():
            np.testing.assert_array_equal(loaded.params[name], value)

        batch = small_dataset.batch("test")
        np.testing.assert_array_equal(loaded.predict_scores(batch), model.predict_scores(batch))

    def test_document_layout(self, tiny_model_config):
        document = checkpoint_to_dict(TabularModel(tiny_model_config))
        assert document["format_version"] == 1
        assert list(document["params"]) == sorted(document["params"])
        entry = document["params"]["layer0.attn.wq"]
        assert entry["shape"] == [8, 8] and len(entry["values"]) == 64

    def test_unsupported_version(self, tiny_model_config):
        document = checkpoint_to_dict(TabularModel(tiny_model_config))
        document["format_version"] = 99
        with pytest.raises(ConfigError):
            checkpoint_from_dict(document)

    def test_missing_parameter(self, tiny_model_config):
        document = checkpoint_to_dict(TabularModel(tiny_model_config))
        del document["params"]["head.w1"]
        with pytest.raises(DataError):
            checkpoint_from_dict(document)

    def test_unexpected_parameter(self, tiny_model_config):
        document = checkpoint_to_dict(TabularModel(tiny_model_config))
        document["params"]["layer99.attn.wq"] = {"shape": [1], "values": [0.5]}
        with pytest.raises(DataError, match="unexpected"):
            checkpoint_from_dict(document)

    def test_values_do_not_fill_shape(self, tiny_model_config):
        document = checkpoint_to_dict(TabularModel(tiny_model_config))
        document["params"]["head.b1"]["values"].append(0.0)
        with pytest.raises(DataError):
            checkpoint_from_dict(document)

    def test_wrong_shape(self, tiny_model_config):
        document = checkpoint_to_dict(TabularModel(tiny_model_config))
        document["params"]["layer0.attn.wq"]["shape"] = [4, 16]
        with pytest.raises(DataError):
            checkpoint_from_dict(document)

    def test_invalid_json_reports_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n"format_version": 1,\n"config": }\n')
        with pytest.raises(DataError) as info:
            load_checkpoint(path)
        assert info.value.line == 3

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_checkpoint(tmp_path / "absent.json")


class TestResultRecord:

    def make_result(self):
        return ExperimentResult(
            name="quick", seed=2, config={"training": {"lr": 0.001}},
            task="binary", primary_metric="auroc",
            metrics={"auroc": np.float64(0.91), "accuracy": 0.8},
            history={"train_loss": [0.7, 0.6]},
            best_epoch=2,
            timing=RunTiming(finetune_epoch_seconds=[0.5, 1.5]),
        )

    def test_json_round_trip(self, tmp_path):
        result = self.make_result()
        path = result.save(tmp_path / "result.json")
        loaded = ExperimentResult.load(path)
        assert loaded.to_dict() == result.to_dict()
        assert isinstance(json.loads(path.read_text())["metrics"]["auroc"], float)

    def test_primary_value(self):
        result = self.make_result()
        assert result.primary_value == pytest.approx(0.91)
        assert result.succeeded
        result.primary_metric = "r2"
        assert np.isnan(result.primary_value)

    def test_deterministic_dict_drops_timing(self):
        data = self.make_result().deterministic_dict()
        assert "timing" not in data and data["seed"] == 2

    def test_failed_status(self):
        result = ExperimentResult(name="x", seed=0, config={}, status=STATUS_FAILED, error="DataError: boom")
        assert not result.succeeded

    def test_mean_epoch_seconds(self):
        assert RunTiming(finetune_epoch_seconds=[0.5, 1.5]).mean_epoch_seconds == 1.0
        assert np.isnan(RunTiming().mean_epoch_seconds)

    def test_make_json_safe(self):
        payload = make_json_safe({"a": np.arange(3), "b": (np.float32(0.5), np.bool_(True)), "c": {"d": np.int32(4)}})
        assert payload == {"a": [0, 1, 2], "b": [0.5, True], "c": {"d": 4}}
        json.dumps(payload)
