"""
tests/test_diagnostics.py
"""
from dataclasses import replace

import numpy as np
import pytest

from attention import AttentionMap, power_convergence_curve
from autodiff import Tape
from diagnostics import (
    OversmoothingReport,
    attention_convergence_report,
    attention_spectrum,
    compare_oversmoothing,
    head_values,
    high_frequency_ratio,
    layer_report,
    normalized_singular_values,
    singular_value_cutoff,
    token_cosine_similarity,
)
from errors import ParameterError, ShapeError, UndefinedMetricError
from nn import TabularModel
from conftest import symmetric_doubly_stochastic


class TestFeatureMetrics:

    def test_cosine_identical_tokens(self):
        assert token_cosine_similarity(np.tile([1.0, 2.0, -1.0], (4, 1))) == pytest.approx(1.0)

    def test_cosine_orthogonal_tokens(self):
        assert token_cosine_similarity(np.eye(3)) == 0.0

    def test_cosine_skips_zero_rows(self):
        x = np.array([[1.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
        assert token_cosine_similarity(x) == pytest.approx(1.0)

    def test_cosine_invariant_under_positive_scaling(self, rng):
        for _ in range(20):
            x = rng.standard_normal((6, 4))
            c = float(10.0 ** rng.uniform(-3, 3))
            assert token_cosine_similarity(c * x) == pytest.approx(token_cosine_similarity(x), abs=1e-12)

    def test_cosine_needs_two_tokens(self):
        with pytest.raises(UndefinedMetricError):
            token_cosine_similarity(np.array([[1.0, 2.0], [0.0, 0.0]]))

    def test_normalized_singular_values(self, rng):
        sv = normalized_singular_values(rng.standard_normal((6, 4)))
        assert sv[0] == 1.0 and len(sv) == 4
        assert np.all(np.diff(sv) <= 0)
        with pytest.raises(UndefinedMetricError):
            normalized_singular_values(np.zeros((3, 3)))

    def test_rank_one_features(self):
        sv = normalized_singular_values(np.outer([1.0, 2.0, 3.0], [1.0, -1.0]))
        assert singular_value_cutoff(sv) == 1

    def test_cutoff(self):
        assert singular_value_cutoff([1.0, 0.5, 0.05, 0.2]) == 2
        assert singular_value_cutoff([1.0, 0.5]) == 2

    def test_high_frequency_ratio(self, rng):
        assert high_frequency_ratio(np.tile([1.0, 3.0], (5, 1))) == 0.0
        assert 0.0 < high_frequency_ratio(rng.standard_normal((5, 3))) <= 1.0
        with pytest.raises(UndefinedMetricError):
            high_frequency_ratio(np.zeros((2, 2)))

    def test_attention_spectrum(self, rng):
        eigenvalues = attention_spectrum(AttentionMap(symmetric_doubly_stochastic(rng, 6)))
        assert eigenvalues[0] == pytest.approx(1.0)
        assert np.all(np.abs(eigenvalues) <= 1.0 + 1e-12)


class TestLayerReport:

    def test_structure(self, tiny_model_config, small_dataset):
        model = TabularModel(tiny_model_config)
        report = layer_report(model, small_dataset.batch("test").subset(np.arange(8)))
        assert [layer.layer for layer in report.layers] == [0, 1, 2]
        assert report.layers[0].attention_eigenvalues == []
        assert len(report.layers[1].attention_eigenvalues) == 6
        assert len(report.layers[2].response_on_grid) == len(report.lambda_grid) == 101
        assert len(report.convergence_curve) == 50
        assert report.basis == "chebyshev" and report.order == 3

    def test_curve_follows_value_projection(self, tiny_model_config, small_dataset):
        model = TabularModel(tiny_model_config)
        batch = small_dataset.batch("test").subset(np.arange(4))
        report = layer_report(model, batch)

        activations = model.encode(Tape(), batch)
        head_dim = tiny_model_config.head_dim
        v = activations.features[1][0] @ model.params["layer1.attn.wv"][:, :head_dim]
        expected = power_convergence_curve(AttentionMap(activations.attention[1][0][0]), v, 50)
        np.testing.assert_allclose(report.convergence_curve, expected, rtol=1e-12)

    def test_vanilla_response_is_identity(self, tiny_model_config, small_dataset):
        model = TabularModel(replace(tiny_model_config, attention_kind="vanilla"))
        report = layer_report(model, small_dataset.batch("test").subset(np.arange(4)), layer_range=[1])
        layer = report.layers[0]
        np.testing.assert_allclose(layer.response_on_spectrum, layer.attention_eigenvalues, atol=1e-15)
        assert report.basis == "power" and report.order == 1

    def test_save_and_load(self, tiny_model_config, small_dataset, tmp_path):
        report = layer_report(TabularModel(tiny_model_config), small_dataset.batch("valid"))
        path = report.save(tmp_path / "report.json")
        assert (tmp_path / "report.csv").exists()
        loaded = OversmoothingReport.load(path)
        assert loaded.to_dict() == report.to_dict()

    def test_frame_is_long_format(self, tiny_model_config, small_dataset):
        frame = layer_report(TabularModel(tiny_model_config), small_dataset.batch("valid")).to_frame()
        assert list(frame.columns) == ["layer", "metric", "index", "value"]
        assert set(frame["metric"]) >= {"cosine_similarity", "singular_values", "convergence_curve"}


class TestConvergenceReport:

    def test_report(self, tiny_model_config, small_dataset, tmp_path):
        model = TabularModel(tiny_model_config)
        report = attention_convergence_report(model, small_dataset.batch("test"), layer=1, head=1, row=2)
        assert report.markov["is_stochastic"] and report.markov["is_irreducible"]
        assert 0.0 <= report.predicted_rate <= 1.0
        assert len(report.convergence_curve) == 200
        assert set(report.pagerank) == {"0.05", "0.15", "0.5"}
        for entry in report.pagerank.values():
            assert len(entry["error_curve"]) == 51
            assert entry["violations"] == []
        report.save(tmp_path / "convergence.json")
        assert (tmp_path / "convergence.json").exists()

    def test_curve_follows_head_values(self, tiny_model_config, small_dataset):
        model = TabularModel(tiny_model_config)
        batch = small_dataset.batch("test")
        report = attention_convergence_report(model, batch, layer=1, head=1, row=2, steps=30)

        activations = model.encode(Tape(), batch.subset(np.array([2])))
        x = activations.features[1][0]
        v = head_values(model, x, layer=1, head=1)
        head_dim = tiny_model_config.head_dim
        np.testing.assert_array_equal(v, x @ model.params["layer1.attn.wv"][:, head_dim:2 * head_dim])
        expected = power_convergence_curve(AttentionMap(activations.attention[1][1][0]), v, 30)
        np.testing.assert_allclose(report.convergence_curve, expected, rtol=1e-12)

    @pytest.mark.parametrize("kwargs", [{"layer": 2}, {"head": 2}, {"row": 10_000}])
    def test_out_of_range(self, tiny_model_config, small_dataset, kwargs):
        with pytest.raises(ShapeError):
            attention_convergence_report(TabularModel(tiny_model_config), small_dataset.batch("test"), **kwargs)


class TestOversmoothingComparison:

    def test_shapes(self, tiny_model_config, small_dataset):
        comparison = compare_oversmoothing(tiny_model_config, small_dataset.batch("test"), seeds=[1, 2, 3])
        assert len(comparison.vanilla_cosine) == len(comparison.cheatt_cutoff) == 3
        payload = comparison.to_dict()
        assert set(payload["median_cosine"]) == {"vanilla", "cheatt"}

    def test_untrained_flag_and_kind_check(self, tiny_model_config, small_dataset):
        comparison = compare_oversmoothing(tiny_model_config, small_dataset.batch("test"), seeds=[1])
        assert not comparison.trained
        with pytest.raises(ParameterError):
            comparison.record("linear", 0.5, 3)
