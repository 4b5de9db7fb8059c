"""Training, scoring and ranking-comparison pipeline.

Each (dataset, bins, model-index) job trains one capped-leaf tree on the
discretized table, exports it to the interchange JSON, has the engine CLI
validate it and compute usefulness scores (`--output json`), computes
SHAP-based global importances for the same model, and records accuracies.
Jobs run in a process pool and results are merged deterministically by
their (dataset, bins, index) key.
"""

import csv
import json
import subprocess
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.tree import DecisionTreeClassifier

from .config import ExperimentConfig
from .datasets import REGISTRY, prepare
from .export import predict_document, write_model
from .treeshap import TreeArrays, mean_abs_shap

TOP_SIZES = (1, 3, 5, 7)


class ExportValidationFailed(Exception):
    """The engine CLI rejected an exported model."""


def _cli(*args):
    return [sys.executable, "-m", "xplain.cli", *args]


def run_cli(*args):
    proc = subprocess.run(_cli(*args), capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


@dataclass(frozen=True)
class ModelRecord:
    dataset: str
    bins: int
    index: int
    seed: int
    model_path: str
    train_accuracy: float
    test_accuracy: float
    leaf_count: int
    usefulness_scores: dict       # feature -> int
    usefulness_ranking: tuple     # features, best first
    shap_scores: dict             # feature -> float
    shap_ranking: tuple

    def key(self):
        return (self.dataset, self.bins, self.index)


def shap_ranking_from_scores(scores):
    """Descending score, ties broken by feature name for determinism."""
    return tuple(sorted(scores, key=lambda f: (-scores[f], f)))


def train_one(config, dataset_name, bins, index, out_dir, data=None):
    """Train, export, CLI-validate and score a single model."""
    spec = REGISTRY[dataset_name]
    seed = config.model_seed(dataset_name, bins, index)
    if data is None:
        data = prepare(spec, bins, config.data_dir, config.test_fraction,
                       config.random_seed)
    # learner defaults per the open-question resolution; the per-model seed
    # only drives sklearn's tie-breaking and the SHAP subsample
    clf = DecisionTreeClassifier(
        max_leaf_nodes=config.leaf_cap(dataset_name, bins),
        random_state=seed,
    )
    clf.fit(data.x_train, data.y_train)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model_path = out_dir / f"{dataset_name}-b{bins}-m{index:02d}.json"
    doc = write_model(model_path, clf, data.feature_names, data.domains,
                      data.n_classes)

    # exported model must reproduce the learner bit-exactly
    parity = predict_document(doc, data.x_train, list(data.feature_names))
    if not np.array_equal(parity, clf.predict(data.x_train)):
        raise ExportValidationFailed(f"{model_path} does not reproduce predictions")

    code, _, err = run_cli("validate", str(model_path), "--output", "json")
    if code != 0:
        raise ExportValidationFailed(f"{model_path} failed CLI validation: {err}")

    code, out, err = run_cli("score", str(model_path), "--all", "--output", "json")
    if code != 0:
        raise ExportValidationFailed(f"score failed on {model_path}: {err}")
    report = json.loads(out)
    scores = {row["feature"]: int(row["necessary_count"]) for row in report["scores"]}
    ranking = tuple(report["ranking"])

    arrays = TreeArrays.from_sklearn(clf)
    rng = np.random.RandomState(seed)
    sample = data.x_train
    if len(sample) > config.shap_sample:
        sample = sample[rng.choice(len(sample), config.shap_sample, replace=False)]
    shap_raw = mean_abs_shap(arrays, sample.astype(float))
    shap_scores = {name: float(shap_raw[i]) for i, name in enumerate(data.feature_names)}

    return ModelRecord(
        dataset=dataset_name,
        bins=bins,
        index=index,
        seed=seed,
        model_path=str(model_path),
        train_accuracy=float(clf.score(data.x_train, data.y_train)),
        test_accuracy=float(clf.score(data.x_test, data.y_test)),
        leaf_count=int(clf.get_n_leaves()),
        usefulness_scores=scores,
        usefulness_ranking=ranking,
        shap_scores=shap_scores,
        shap_ranking=shap_ranking_from_scores(shap_scores),
    )


def _job(payload):
    config_dict, dataset_name, bins, index, out_dir = payload
    config = ExperimentConfig(**config_dict)
    record = train_one(config, dataset_name, bins, index, out_dir)
    return record


def train_and_export(config, dataset_name, bins_list=None, out_dir=None):
    """All models for one dataset; deterministic order of results."""
    from dataclasses import asdict

    bins_list = list(bins_list if bins_list is not None else config.bins)
    out_dir = out_dir or str(Path(config.out_dir) / "models")
    jobs = [
        (asdict(config), dataset_name, bins, index, out_dir)
        for bins in bins_list
        for index in range(config.models_per_config)
    ]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(_job, jobs))
    else:
        records = [_job(job) for job in jobs]
    return sorted(records, key=ModelRecord.key)


@dataclass(frozen=True)
class RankingComparison:
    dataset: str
    bins: int
    per_model: tuple   # one dict {top_k: intersection size} per model
    averages: dict     # top_k -> mean intersection size

    def as_row(self):
        return {f"top-{k}": self.averages[k] for k in TOP_SIZES}


def top_k_intersection(ranking_a, ranking_b, k):
    return len(set(ranking_a[:k]) & set(ranking_b[:k]))


def compare_rankings(records):
    """Average top-k intersections between the two rankings per model."""
    if not records:
        raise ValueError("no model records to compare")
    dataset = records[0].dataset
    bins = records[0].bins
    per_model = []
    for record in sorted(records, key=ModelRecord.key):
        per_model.append({
            k: top_k_intersection(record.usefulness_ranking, record.shap_ranking, k)
            for k in TOP_SIZES
        })
    averages = {
        k: float(np.mean([row[k] for row in per_model])) for k in TOP_SIZES
    }
    return RankingComparison(dataset, bins, tuple(per_model), averages)


def write_score_table(records, path):
    """CSV of 'dataset,bins,model,seed,feature,usefulness,shap' rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset", "bins", "model", "seed", "feature",
                         "usefulness_score", "shap_score",
                         "train_accuracy", "test_accuracy"])
        for record in sorted(records, key=ModelRecord.key):
            for feature in record.usefulness_scores:
                writer.writerow([
                    record.dataset, record.bins, record.index, record.seed,
                    feature, record.usefulness_scores[feature],
                    repr(record.shap_scores[feature]),
                    record.train_accuracy, record.test_accuracy,
                ])
    return path


def write_comparison_table(comparisons, path):
    """Markdown/CSV-ish summary mirroring the usefulness-vs-SHAP table."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset", "bins"] + [f"top-{k}" for k in TOP_SIZES])
        for comparison in comparisons:
            writer.writerow([comparison.dataset, comparison.bins]
                            + [comparison.averages[k] for k in TOP_SIZES])
    return path


def load_records(path):
    """Rebuild enough of the records from a persisted score table to
    recompute ranking comparisons (permutation stability check)."""
    rows = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = (row["dataset"], int(row["bins"]), int(row["model"]))
            entry = rows.setdefault(key, {"useful": {}, "shap": {}, "seed": int(row["seed"]),
                                          "train": float(row["train_accuracy"]),
                                          "test": float(row["test_accuracy"])})
            entry["useful"][row["feature"]] = int(row["usefulness_score"])
            entry["shap"][row["feature"]] = float(row["shap_score"])
    records = []
    for (dataset, bins, index), entry in sorted(rows.items()):
        useful_ranking = tuple(sorted(entry["useful"],
                                      key=lambda f: (-entry["useful"][f], f)))
        records.append(ModelRecord(
            dataset=dataset, bins=bins, index=index, seed=entry["seed"],
            model_path="", train_accuracy=entry["train"],
            test_accuracy=entry["test"],
            leaf_count=0,
            usefulness_scores=entry["useful"],
            usefulness_ranking=useful_ranking,
            shap_scores=entry["shap"],
            shap_ranking=shap_ranking_from_scores(entry["shap"]),
        ))
    return records
