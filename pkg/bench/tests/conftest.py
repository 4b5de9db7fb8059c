"""Synthetic table and spec so the pipeline is testable without the
vendored benchmark datasets (which need network access to fetch)."""

import numpy as np
import pandas as pd
import pytest

from xplain_bench.config import ExperimentConfig
from xplain_bench.datasets import DatasetSpec, prepare_frame


@pytest.fixture(scope="session")
def synthetic_spec():
    return DatasetSpec(
        name="synthetic",
        filename="synthetic.csv",
        target="label",
        features=("signal", "noise", "steps", "color", "flat"),
        passthrough=("color",),
        target_kind="continuous",
    )


@pytest.fixture(scope="session")
def synthetic_frame():
    rng = np.random.RandomState(11)
    n = 900
    signal = rng.uniform(0, 10, n)
    noise = rng.uniform(0, 1, n)
    steps = rng.randint(0, 12, n).astype(float)
    color = rng.choice(["red", "green", "blue"], n)
    flat = np.full(n, 3.5)
    label = signal * 2 + (color == "red") * 6 + steps * 0.4 + rng.normal(0, 0.5, n)
    return pd.DataFrame({
        "signal": signal,
        "noise": noise,
        "steps": steps,
        "color": color,
        "flat": flat,
        "label": label,
    })


@pytest.fixture(scope="session")
def prepared(synthetic_spec, synthetic_frame):
    return prepare_frame(synthetic_spec, synthetic_frame, bins=4,
                         test_fraction=0.2, seed=7)


@pytest.fixture
def small_config():
    return ExperimentConfig(models_per_config=3, jobs=1, shap_sample=200,
                            random_seed=13)
