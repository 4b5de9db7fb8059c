"""End-to-end pipeline over the synthetic table (no vendored datasets)."""

import pytest

from xplain_bench import datasets as datasets_module
from xplain_bench.harness import compare_rankings, train_and_export, train_one
from xplain_bench.plots import score_panels


@pytest.fixture
def synthetic_registry(monkeypatch, synthetic_spec, synthetic_frame):
    monkeypatch.setitem(datasets_module.REGISTRY, "synthetic", synthetic_spec)
    monkeypatch.setattr(
        datasets_module, "load_raw",
        lambda spec, data_dir: synthetic_frame.copy()
        if spec.name == "synthetic" else (_ for _ in ()).throw(AssertionError()),
    )
    return synthetic_spec


def test_train_one_produces_full_record(tmp_path, small_config, synthetic_registry, prepared):
    record = train_one(small_config, "synthetic", 4, 0, tmp_path, data=prepared)
    assert record.seed == small_config.model_seed("synthetic", 4, 0)
    assert record.leaf_count <= small_config.leaf_cap("synthetic", 4)
    assert set(record.usefulness_scores) == set(prepared.feature_names)
    assert set(record.usefulness_ranking) == set(prepared.feature_names)
    assert 0 < record.train_accuracy <= 1
    # the constant column can never matter
    assert record.usefulness_scores["flat"] == 0
    # strong signal outranks pure noise in both rankings
    assert record.usefulness_ranking.index("signal") < record.usefulness_ranking.index("noise")
    assert record.shap_ranking.index("signal") < record.shap_ranking.index("noise")


def test_train_and_export_is_deterministic_and_sorted(tmp_path, small_config,
                                                      synthetic_registry, monkeypatch):
    from dataclasses import replace

    config = replace(small_config, out_dir=str(tmp_path))
    records = train_and_export(config, "synthetic", bins_list=[3, 4])
    assert [r.key() for r in records] == sorted(r.key() for r in records)
    assert len(records) == 2 * config.models_per_config
    again = train_and_export(config, "synthetic", bins_list=[3, 4])
    assert [r.usefulness_ranking for r in records] == [r.usefulness_ranking for r in again]
    assert [r.seed for r in records] == [r.seed for r in again]


def test_rankings_and_plots_from_pipeline(tmp_path, small_config,
                                          synthetic_registry):
    from dataclasses import replace

    config = replace(small_config, out_dir=str(tmp_path))
    records = train_and_export(config, "synthetic", bins_list=[4])
    comparison = compare_rankings(records)
    assert set(comparison.averages) == {1, 3, 5, 7}
    for k, value in comparison.averages.items():
        assert 0 <= value <= k
    image = score_panels(records, tmp_path / "panels.png", title="synthetic")
    assert image.exists() and image.stat().st_size > 0
