"""Experiment configuration, loadable from a single JSON or TOML file."""

import json
from dataclasses import dataclass
from pathlib import Path

DATASETS = ("california", "bike", "adult")
BIN_CHOICES = (3, 4, 5, 6)

# leaves cap per trained tree: cap_factor * number_of_bins
LEAF_CAP_FACTOR = {"california": 100, "bike": 100, "adult": 150}


@dataclass(frozen=True)
class ExperimentConfig:
    datasets: tuple = DATASETS
    bins: tuple = BIN_CHOICES
    models_per_config: int = 20
    test_fraction: float = 0.2
    random_seed: int = 20240801
    jobs: int = 1
    shap_sample: int = 2000  # entities sampled from the training set for SHAP
    data_dir: str = "data"
    out_dir: str = "out"

    def __post_init__(self):
        for name in self.datasets:
            if name not in DATASETS:
                raise ValueError(f"unknown dataset {name!r}")
        for b in self.bins:
            if b not in BIN_CHOICES:
                raise ValueError(f"bin count {b} outside {BIN_CHOICES}")
        if not 0 < self.test_fraction < 1:
            raise ValueError("test_fraction must be in (0, 1)")
        if self.models_per_config < 1 or self.jobs < 1:
            raise ValueError("models_per_config and jobs must be positive")

    def leaf_cap(self, dataset, bins):
        return LEAF_CAP_FACTOR.get(dataset, 100) * bins

    def model_seed(self, dataset, bins, index):
        """Deterministic per-model seed, recorded with every trained model."""
        import zlib

        name_code = zlib.crc32(dataset.encode("utf-8"))
        return (self.random_seed * 1_000_003 + name_code * 10_007
                + bins * 101 + index) % (2**31 - 1)


def load_config(path):
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".toml":
        try:
            import tomllib  # 3.11+
        except ImportError:  # pragma: no cover - 3.10 fallback
            import tomli as tomllib
        raw = tomllib.loads(text)
    else:
        raw = json.loads(text)
    for key in ("datasets", "bins"):
        if key in raw:
            raw[key] = tuple(raw[key])
    return ExperimentConfig(**raw)
