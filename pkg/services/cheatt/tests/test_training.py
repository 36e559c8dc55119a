"""
tests/test_training.py
"""
import json
from dataclasses import replace

import numpy as np
import pandas as pd
import pytest

from diagnostics import final_layer_statistics
from errors import ConfigError, DataError
from storage import ExperimentResult, load_checkpoint
from training import (
    BestParamsCallback,
    CallbackList,
    DataConfig,
    EarlyStoppingCallback,
    ExperimentConfig,
    ExperimentRunner,
    MetricTrackerCallback,
    TrainingConfig,
    default_axis_values,
    format_score,
    golden_config,
    oversmoothing_direction,
    parse_override_value,
    run_experiment,
    sweep,
    timing_overhead,
)


class TestConfig:

    def test_training_validation_lists_problems(self):
        with pytest.raises(ConfigError) as info:
            TrainingConfig(finetune_epochs=-1, batch_size=0, seeds=[]).validate()
        message = str(info.value)
        assert "epoch" in message and "batch_size" in message and "seed" in message

    def test_unknown_keys(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"optimizer": {}})
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"training": {"epochs": 3}})
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"data": {"synthetic": {"rows": 3}}})

    def test_partial_sections_merge_onto_defaults(self):
        config = ExperimentConfig.from_dict({"model": {"order": 10}, "data": {"synthetic": {"noise": 0.0}}})
        assert config.model.order == 10 and config.model.basis == "chebyshev"
        assert config.data.synthetic["noise"] == 0.0 and config.data.synthetic["n_rows"] == 500

    def test_dict_round_trip(self, quick_experiment):
        assert ExperimentConfig.from_dict(json.loads(quick_experiment.to_json())) == quick_experiment

    def test_overrides(self, quick_experiment):
        config = quick_experiment.apply_overrides({
            "model.order": "10",
            "model.basis": "legendre",
            "training.seeds": "[3, 4]",
            "data.synthetic.noise": 0.5,
        })
        assert config.model.order == 10 and config.model.basis == "legendre"
        assert config.training.seeds == [3, 4]
        assert config.data.synthetic["noise"] == 0.5
        assert quick_experiment.model.order == 3

    @pytest.mark.parametrize("key", ["model.", "training.lr.value", "nothing.lr"])
    def test_bad_override_keys(self, quick_experiment, key):
        with pytest.raises(ConfigError):
            quick_experiment.apply_overrides({key: "1"})

    def test_parse_override_value(self):
        assert parse_override_value("10") == 10
        assert parse_override_value("true") is True
        assert parse_override_value("chebyshev") == "chebyshev"
        assert parse_override_value(0.5) == 0.5

    def test_from_file(self, tmp_path, quick_experiment):
        path = tmp_path / "config.json"
        path.write_text(quick_experiment.to_json())
        assert ExperimentConfig.from_file(path) == quick_experiment

        path.write_text("{\n  \"name\": \n")
        with pytest.raises(ConfigError):
            ExperimentConfig.from_file(path)
        path.write_text("[1, 2]")
        with pytest.raises(ConfigError):
            ExperimentConfig.from_file(path)
        with pytest.raises(ConfigError):
            ExperimentConfig.from_file(tmp_path / "absent.json")

    def test_golden_config(self):
        config = golden_config()
        assert config.validate()
        assert config.data.seed == 7 and config.data.synthetic["n_rows"] == 500
        assert (config.model.depth, config.model.order, config.model.attention_kind) == (4, 5, "cheatt")
        assert config.training.finetune_epochs == 200

    def test_model_for_uses_dataset_layout(self, quick_experiment, small_dataset):
        model = quick_experiment.model_for(small_dataset, seed=9)
        assert model.seed == 9 and model.n_tokens == 6 and model.categorical_cardinalities == [8, 8]

    def test_data_config_csv_source(self, tmp_path):
        path = tmp_path / "t.csv"
        pd.DataFrame({"x": np.arange(30.0), "y": [0, 1] * 15}).to_csv(path, index=False)
        dataset = DataConfig(path=str(path), label="y", seed=1).load()
        assert dataset.label.name == "y" and dataset.n_rows == 30


class TestCallbacks:

    def test_early_stopping(self):
        early = EarlyStoppingCallback(patience=2)
        for epoch, loss in enumerate([1.0, 0.9, 0.95, 0.91], start=1):
            early.on_epoch_end(epoch, {"val_loss": loss})
        assert early.should_stop and early.stopped_epoch == 4
        early.on_train_begin()
        assert not early.should_stop and early.wait == 0

    def test_early_stopping_max_mode(self):
        early = EarlyStoppingCallback(monitor="auroc", patience=1, mode="max", min_delta=0.01)
        early.on_epoch_end(1, {"auroc": 0.8})
        early.on_epoch_end(2, {"auroc": 0.805})
        assert early.should_stop

    def test_best_params_restore(self):
        class Holder:
            params = {"w": np.array([0.0])}

        model = Holder()
        best = BestParamsCallback()
        assert not best.restore(model)
        for epoch, loss in enumerate([0.5, 0.2, 0.4], start=1):
            model.params = {"w": np.array([float(epoch)])}
            best.on_epoch_end(epoch, {"val_loss": loss}, model=model)
        assert best.restore(model)
        assert best.best_epoch == 2
        np.testing.assert_array_equal(model.params["w"], [2.0])

    def test_callback_list(self):
        tracker = MetricTrackerCallback()
        early = EarlyStoppingCallback(patience=1)
        callbacks = CallbackList([tracker])
        callbacks.add(early)
        callbacks.on_train_begin()
        callbacks.on_epoch_end(1, {"val_loss": 1.0})
        callbacks.on_epoch_end(2, {"val_loss": 2.0})
        assert callbacks.should_stop
        assert tracker.get_history() == {"val_loss": [1.0, 2.0]}


class TestExperiment:

    def test_run_writes_outputs(self, quick_experiment, tmp_path):
        runner = ExperimentRunner(quick_experiment, seed=1, output_dir=tmp_path)
        result = runner.run()

        assert result.succeeded and result.primary_metric == "auroc"
        assert 0.0 <= result.metrics["auroc"] <= 1.0
        assert len(result.history["train_loss"]) == len(result.timing.finetune_epoch_seconds) <= 3
        assert result.split_sizes == {"train": 84, "valid": 12, "test": 24}
        assert result.config["model"]["categorical_cardinalities"] == [8, 8]
        assert set(result.coefficient_profile) == {"layer0"}
        assert result.oversmoothing["layers"][0]["layer"] == 0
        assert result.timing.inference_seconds_per_1000 > 0
        assert "EXPERIMENT SUMMARY" in runner.get_training_summary()

        for name in ("result.json", "checkpoint.json", "oversmoothing.json", "oversmoothing.csv"):
            assert (tmp_path / name).exists()
        model, metadata = load_checkpoint(tmp_path / "checkpoint.json")
        assert metadata["seed"] == 1
        dataset = quick_experiment.data.load()
        np.testing.assert_array_equal(
            model.predict_scores(dataset.batch("test")),
            runner.model.predict_scores(dataset.batch("test"))
        )
        assert ExperimentResult.load(tmp_path / "result.json").deterministic_dict() == result.deterministic_dict()

    def test_deterministic(self, quick_experiment):
        first = run_experiment(quick_experiment, seed=2)
        second = run_experiment(quick_experiment, seed=2)
        assert first.deterministic_dict() == second.deterministic_dict()

    def test_seed_changes_run(self, quick_experiment):
        assert run_experiment(quick_experiment, seed=1).history != run_experiment(quick_experiment, seed=2).history

    def test_pretraining(self, quick_experiment):
        config = replace(quick_experiment, training=replace(quick_experiment.training, pretrain_epochs=2))
        result = run_experiment(config, seed=1)
        assert len(result.history["pretrain_loss"]) == 2
        assert len(result.timing.pretrain_epoch_seconds) == 2

    def test_untrained_model_is_near_chance(self):
        config = ExperimentConfig(training=TrainingConfig(finetune_epochs=0, seeds=[1]))
        config = config.with_model(depth=1)
        result = run_experiment(config)
        assert result.best_epoch is None and result.history == {}
        assert 0.0 <= result.metrics["auroc"] <= 1.0

    def test_empty_validation_split_uses_train_loss(self, quick_experiment):
        dataset = quick_experiment.data.load()
        splits = dict(dataset.splits)
        splits["train"] = np.sort(np.concatenate([splits["train"], splits["valid"]]))
        splits["valid"] = np.array([], dtype=np.int64)
        result = run_experiment(quick_experiment, seed=1, dataset=replace(dataset, splits=splits))
        assert result.history["val_loss"] == result.history["train_loss"]

    def test_failure_flushes_partial_result(self, quick_experiment, tmp_path):
        dataset = quick_experiment.data.load()
        splits = dict(dataset.splits, test=np.array([], dtype=np.int64))
        runner = ExperimentRunner(quick_experiment, seed=1, output_dir=tmp_path,
                                  dataset=replace(dataset, splits=splits))
        with pytest.raises(DataError):
            runner.run()
        saved = ExperimentResult.load(tmp_path / "result.json")
        assert saved.status == "failed" and "DataError" in saved.error
        assert len(saved.history["train_loss"]) >= 1

    def test_regression_task(self, quick_experiment):
        config = quick_experiment.apply_overrides({"data.synthetic.task": "regression"})
        result = run_experiment(config, seed=1)
        assert result.primary_metric == "r2" and set(result.metrics) == {"r2", "rmse", "mae"}


class TestSweep:

    def test_order_sweep_table(self, quick_experiment, tmp_path):
        config = replace(quick_experiment, training=replace(quick_experiment.training, finetune_epochs=1))
        result = sweep(config, "order_k", values=[2, 3], seeds=[1, 2], output_dir=tmp_path)

        assert result.axis == "order"
        assert len(result.table) == 2
        assert list(result.table["n_runs"]) == [2, 2]
        assert list(result.table["n_failed"]) == [0, 0]
        assert all("±" in score for score in result.table["score"])
        assert (tmp_path / "sweep.csv").exists()
        assert (tmp_path / "order=3" / "seed2" / "result.json").exists()
        assert all(r.config["model"]["order"] == 2 for r in result.runs["2"])

    def test_single_value_matches_run_experiment(self, quick_experiment):
        dataset = quick_experiment.data.load()
        result = sweep(quick_experiment, "attention_kind", values=["vanilla"], seeds=[1], dataset=dataset)
        direct = run_experiment(quick_experiment.with_model(attention_kind="vanilla"), seed=1, dataset=dataset)
        assert len(result.table) == 1
        assert result.table["auroc_mean"].iloc[0] == direct.metrics["auroc"]
        assert result.runs["vanilla"][0].deterministic_dict() == direct.deterministic_dict()

    def test_failed_cells_do_not_stop_the_sweep(self, quick_experiment):
        config = replace(quick_experiment, training=replace(quick_experiment.training, finetune_epochs=1))
        result = sweep(config, "basis", values=["hermite", "power"], seeds=[1])
        table = result.table.set_index("value")
        assert table.loc["hermite", "n_failed"] == 1
        assert table.loc["hermite", "score"] == "failed"
        assert table.loc["power", "n_failed"] == 0

    def test_unknown_axis(self, quick_experiment):
        with pytest.raises(ConfigError):
            sweep(quick_experiment, "depth", values=[1])

    def test_default_axis_values(self):
        assert default_axis_values("k") == [2, 3, 5, 10]
        assert default_axis_values("basis") == ["power", "chebyshev", "legendre", "jacobi"]

    def test_format_score(self):
        assert format_score(0.9512, 0.0123) == "0.951 ± 0.012"
        assert format_score(float("nan"), float("nan")) == "failed"

    def test_timing_overhead(self, quick_experiment):
        config = replace(quick_experiment, training=replace(quick_experiment.training, finetune_epochs=1))
        overhead = timing_overhead(config, seed=1)
        assert set(overhead) == {"vanilla_epoch_seconds", "cheatt_epoch_seconds", "ratio"}
        assert overhead["ratio"] > 0

    def test_oversmoothing_direction_trains_both_kinds(self, quick_experiment):
        config = replace(quick_experiment, training=replace(quick_experiment.training, finetune_epochs=2))
        dataset = config.data.load()
        comparison = oversmoothing_direction(config, depth=2, seeds=[1, 2], dataset=dataset)
        assert comparison.trained and comparison.depth == 2
        assert len(comparison.vanilla_cosine) == len(comparison.cheatt_cutoff) == 2

        runner = ExperimentRunner(config.with_model(attention_kind="cheatt", depth=2), seed=2, dataset=dataset)
        runner.run()
        cosine, cutoff = final_layer_statistics(runner.model, dataset.batch("test"))
        assert comparison.cheatt_cosine[1] == pytest.approx(cosine, abs=1e-12)
        assert comparison.cheatt_cutoff[1] == cutoff
