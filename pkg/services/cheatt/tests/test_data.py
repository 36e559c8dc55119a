"""
tests/test_data.py
"""
import numpy as np
import pandas as pd
import pytest
from sklearn.preprocessing import StandardScaler

from data import (
    MASK,
    MISSING,
    SPLIT_COLUMN,
    UNK,
    DataSplitter,
    SyntheticSpec,
    TableBatch,
    build_dataset,
    generate_synthetic,
    infer_column_kind,
    load_csv,
    save_csv,
)
from errors import ConfigError, DataError


def write(tmp_path, text, name="table.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCsv:

    def test_three_row_file(self, tmp_path):
        path = write(tmp_path, "size,color,y\n1.5,red,0\n2.5,blue,1\n4.0,red,1\n")
        dataset = load_csv(path, label="y", task="binary", categorical_threshold=1)
        assert [c.name for c in dataset.continuous_columns] == ["size"]
        assert [c.name for c in dataset.categorical_columns] == ["color"]
        assert dataset.label.task == "binary"

    def test_schema_hint_forces_kind(self, tmp_path):
        path = write(tmp_path, "size,color,y\n1.5,red,0\n2.5,blue,1\n4.0,red,1\n")
        dataset = load_csv(path, label="y", schema_hints={"size": "continuous"})
        assert [c.name for c in dataset.continuous_columns] == ["size"]

    def test_label_defaults_to_last_column(self, tmp_path):
        path = write(tmp_path, "a,b,target\n1,x,0\n2,y,1\n3,x,0\n4,y,1\n")
        assert load_csv(path).label.name == "target"

    def test_missing_cells(self, tmp_path):
        rows = ["x,k,y,__split__"]
        rows += [f"{i},{'a' if i % 2 else 'b'},{i % 2},train" for i in range(30)]
        rows += [",,1,test", "5,zzz,0,test"]
        dataset = load_csv(write(tmp_path, "\n".join(rows) + "\n"), label="y")

        x = dataset.continuous_columns[0]
        assert x.mean == pytest.approx(14.5)
        test = dataset.splits["test"]
        # imputed train mean standardizes to 0
        assert dataset.continuous[test[0], 0] == pytest.approx(0.0, abs=1e-12)
        assert dataset.categorical[test[0], 0] == MISSING
        assert dataset.categorical[test[1], 0] == UNK

    def test_explicit_split_column(self, tmp_path):
        rows = ["x,y,__split__", "1,0,train", "2,1,train", "3,0,val", "4,1,Test", "5,0,train", "6,1,train"]
        dataset = load_csv(write(tmp_path, "\n".join(rows) + "\n"), label="y")
        np.testing.assert_array_equal(dataset.splits["train"], [0, 1, 4, 5])
        np.testing.assert_array_equal(dataset.splits["valid"], [2])
        np.testing.assert_array_equal(dataset.splits["test"], [3])
        assert SPLIT_COLUMN not in dataset.frame.columns

    def test_unknown_split_label_has_line(self, tmp_path):
        path = write(tmp_path, "x,y,__split__\n1,0,train\n2,1,holdout\n")
        with pytest.raises(DataError) as info:
            load_csv(path, label="y")
        assert info.value.line == 3

    def test_ragged_row_has_line(self, tmp_path):
        path = write(tmp_path, "a,b,y\n1,2,0\n3,4\n5,6,1\n")
        with pytest.raises(DataError) as info:
            load_csv(path)
        assert info.value.line == 3
        assert "line 3" in str(info.value)

    def test_empty_file(self, tmp_path):
        with pytest.raises(DataError):
            load_csv(write(tmp_path, ""))

    def test_header_only(self, tmp_path):
        with pytest.raises(DataError) as info:
            load_csv(write(tmp_path, "a,b,y\n"))
        assert info.value.line == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_csv(tmp_path / "absent.csv")

    def test_missing_label_value(self, tmp_path):
        path = write(tmp_path, "x,y\n1,0\n2,\n3,1\n4,0\n")
        with pytest.raises(DataError) as info:
            load_csv(path, label="y", task="binary")
        assert info.value.line == 3

    def test_unknown_label(self, tmp_path):
        with pytest.raises(DataError):
            load_csv(write(tmp_path, "x,y\n1,0\n2,1\n"), label="z")

    def test_round_trip(self, tmp_path):
        dataset = generate_synthetic(SyntheticSpec(n_rows=80), seed=4)
        path = save_csv(dataset, tmp_path / "synthetic.csv")
        assert load_csv(path, label="label") == dataset

    def test_decimal_cells_parse_to_nearest_double(self, tmp_path):
        values = np.random.default_rng(0).normal(size=200) * 10.0 ** np.arange(-3, 5).repeat(25)
        rows = ["x,y"] + [f"{v!r},{i % 2}" for i, v in enumerate(values)]
        dataset = load_csv(write(tmp_path, "\n".join(rows) + "\n"), label="y")

        train = dataset.splits["train"]
        expected = StandardScaler().fit(values[train, None]).transform(values[:, None])[:, 0]
        np.testing.assert_array_equal(dataset.continuous[:, 0], expected)

    def test_standardization_on_train_split(self, tmp_path):
        dataset = generate_synthetic(SyntheticSpec(n_rows=100), seed=11)
        loaded = load_csv(save_csv(dataset, tmp_path / "hundred.csv"), label="label")
        train = loaded.continuous[loaded.splits["train"]]
        np.testing.assert_allclose(train.mean(axis=0), 0.0, atol=1e-9)
        np.testing.assert_allclose(train.var(axis=0), 1.0, atol=1e-6)

    def test_constant_column_flagged(self):
        frame = pd.DataFrame({"flat": [3.0] * 30, "x": np.arange(30.0), "y": [0, 1] * 15})
        splits = DataSplitter.random_split(30, seed=0)
        dataset = build_dataset(frame, "y", splits, categorical_threshold=5, schema_hints={"flat": "continuous"})
        flat = next(c for c in dataset.columns if c.name == "flat")
        assert flat.kind == "continuous" and flat.constant
        np.testing.assert_array_equal(dataset.continuous[:, 0], 0.0)


class TestColumnKind:

    def test_binary_numeric_is_categorical(self):
        values = pd.Series(["0", "1"] * 20, name="flag")
        assert infer_column_kind(values, np.arange(40), threshold=20) == "categorical"

    def test_many_numeric_values_are_continuous(self):
        values = pd.Series([str(i) for i in range(40)], name="n")
        assert infer_column_kind(values, np.arange(40), threshold=20) == "continuous"

    def test_threshold_counts_train_rows_only(self):
        values = pd.Series([str(i) for i in range(40)], name="n")
        assert infer_column_kind(values, np.arange(5), threshold=20) == "categorical"

    def test_text_is_categorical(self):
        values = pd.Series(["a", "b", "1.5"], name="t")
        assert infer_column_kind(values, np.arange(3), threshold=1) == "categorical"

    def test_bad_hint(self):
        with pytest.raises(DataError):
            infer_column_kind(pd.Series(["a"], name="t"), np.arange(1), 20, hint="continuous")
        with pytest.raises(DataError):
            infer_column_kind(pd.Series(["1"], name="t"), np.arange(1), 20, hint="ordinal")


class TestSplitter:

    def test_random_split_is_partition(self):
        splits = DataSplitter.random_split(101, seed=5)
        assert DataSplitter.check_disjoint(splits, 101)
        assert len(splits["train"]) == 71 and len(splits["valid"]) == 10

    def test_random_split_seeded(self):
        first, second = DataSplitter.random_split(50, 9), DataSplitter.random_split(50, 9)
        for name in first:
            np.testing.assert_array_equal(first[name], second[name])

    def test_ratios_must_sum_to_one(self):
        with pytest.raises(ConfigError):
            DataSplitter.random_split(10, 0, 0.5, 0.1, 0.1)


class TestSynthetic:

    def test_default_layout(self):
        dataset = generate_synthetic(SyntheticSpec(), seed=7)
        assert dataset.n_rows == 500
        assert len(dataset.continuous_columns) == 6 and len(dataset.categorical_columns) == 2
        assert dataset.extras["informative"] == ["c0", "c1", "c2"]
        assert DataSplitter.check_disjoint(dataset.splits, 500)

    def test_seeded(self):
        spec = SyntheticSpec(n_rows=50)
        assert generate_synthetic(spec, 2) == generate_synthetic(spec, 2)
        assert not generate_synthetic(spec, 2) == generate_synthetic(spec, 3)

    def test_noiseless_rule_is_perfectly_ranked(self):
        from evaluation import auroc
        dataset = generate_synthetic(SyntheticSpec(noise=0.0), seed=1)
        assert auroc(dataset.extras["oracle_score"], dataset.labels) == 1.0

    @pytest.mark.parametrize("task", ["multiclass", "regression"])
    def test_other_tasks(self, task):
        dataset = generate_synthetic(SyntheticSpec(n_rows=200, task=task, n_classes=4), seed=0)
        assert dataset.label.task == task
        if task == "multiclass":
            assert 2 <= dataset.label.n_classes <= 4
        else:
            train = dataset.labels[dataset.splits["train"]]
            assert train.mean() == pytest.approx(0.0, abs=1e-9)

    def test_zero_rows(self):
        with pytest.raises(DataError):
            generate_synthetic(SyntheticSpec(n_rows=0), seed=0)

    def test_invalid_spec(self):
        with pytest.raises(ConfigError):
            generate_synthetic(SyntheticSpec(n_continuous=1, n_categorical=1), seed=0)
        with pytest.raises(ConfigError):
            SyntheticSpec.from_dict({"rows": 10})


class TestBatch:

    def test_masked(self):
        batch = TableBatch(np.array([[4, 5]]), np.array([[1.5, -2.0]]), np.array([1]))
        masked = batch.masked(np.array([[True, False, False, True]]))
        np.testing.assert_array_equal(masked.categorical, [[MASK, 5]])
        np.testing.assert_array_equal(masked.continuous, [[1.5, 0.0]])
        np.testing.assert_array_equal(batch.categorical, [[4, 5]])

    def test_unknown_split(self, small_dataset):
        with pytest.raises(DataError):
            small_dataset.batch("holdout")

    def test_model_layout(self, small_dataset):
        layout = small_dataset.model_layout()
        assert layout["n_continuous"] == 4
        assert layout["categorical_cardinalities"] == [8, 8]
        assert layout["task"] == "binary" and layout["n_classes"] == 2
