"""Benchmark harness: discretized datasets, capped-leaf trees, usefulness
scores through the engine CLI, and SHAP ranking comparisons."""

from .config import ExperimentConfig, load_config
from .datasets import DiscretizedDataset, MissingColumn, MissingFile, prepare, prepare_frame
from .harness import (
    ModelRecord,
    RankingComparison,
    compare_rankings,
    top_k_intersection,
    train_and_export,
    train_one,
)
from .treeshap import TreeArrays, exact_shapley, mean_abs_shap, shap_values

__all__ = [name for name in dir() if not name.startswith("_")]
