import numpy as np
import pandas as pd
import pytest

from xplain_bench.datasets import (
    REGISTRY,
    MissingColumn,
    MissingFile,
    load_raw,
    prepare_frame,
)


def test_passthrough_columns_keep_their_categories(synthetic_spec, prepared):
    assert prepared.domains["color"] == (0, 1, 2)
    assert prepared.encoders["color"] == ("blue", "green", "red")


def test_numeric_columns_are_binned(prepared):
    assert len(prepared.domains["signal"]) == 4
    for column, name in zip(prepared.x_train.T, prepared.feature_names):
        assert set(np.unique(column)) <= set(prepared.domains[name])


def test_constant_column_collapses_to_padded_domain(prepared):
    # 'flat' is constant: one occupied bin, domain padded to two categories
    assert prepared.domains["flat"] == (0, 1)
    position = prepared.feature_names.index("flat")
    assert set(np.unique(prepared.x_train[:, position])) == {0}


def test_continuous_target_is_binned(prepared):
    assert prepared.n_classes == 4
    assert set(np.unique(prepared.y_train)) <= set(range(4))


def test_split_fraction(prepared):
    total = len(prepared.x_train) + len(prepared.x_test)
    assert total == 900
    assert len(prepared.x_test) == 180


def test_split_is_seeded(synthetic_spec, synthetic_frame):
    a = prepare_frame(synthetic_spec, synthetic_frame, 4, 0.2, 7)
    b = prepare_frame(synthetic_spec, synthetic_frame, 4, 0.2, 7)
    c = prepare_frame(synthetic_spec, synthetic_frame, 4, 0.2, 8)
    assert np.array_equal(a.x_train, b.x_train)
    assert not np.array_equal(a.x_train, c.x_train)


def test_missing_column_is_loud(synthetic_spec, synthetic_frame):
    broken = synthetic_frame.drop(columns=["steps"])
    with pytest.raises(MissingColumn):
        prepare_frame(synthetic_spec, broken, 4, 0.2, 7)


def test_missing_file_is_loud(tmp_path):
    with pytest.raises(MissingFile):
        load_raw(REGISTRY["california"], tmp_path)


def test_missing_registered_column_is_loud(tmp_path):
    path = tmp_path / "california.csv"
    pd.DataFrame({"MedInc": [1.0, 2.0]}).to_csv(path, index=False)
    with pytest.raises(MissingColumn):
        load_raw(REGISTRY["california"], tmp_path)


def test_string_columns_headed_for_binning_are_encoded_first():
    from xplain_bench.datasets import DatasetSpec

    spec = DatasetSpec(
        name="strings", filename="s.csv", target="y",
        features=("word", "kept"), passthrough=("kept",),
        target_kind="binary",
    )
    frame = pd.DataFrame({
        "word": ["aa", "bb", "cc", "dd", "ee", "ff"] * 20,
        "kept": ["x", "y"] * 60,
        "y": ["no", "yes"] * 60,
    })
    data = prepare_frame(spec, frame, bins=3, test_fraction=0.2, seed=1)
    assert len(data.domains["word"]) == 3  # six codes binned down to three
    assert data.domains["kept"] == (0, 1)
    assert data.n_classes == 2


def test_bike_and_adult_passthrough_registration():
    assert REGISTRY["bike"].passthrough == ("season", "yr", "holiday",
                                            "workingday", "weathersit")
    assert REGISTRY["adult"].passthrough == ("race", "sex")
    assert REGISTRY["california"].passthrough == ()
