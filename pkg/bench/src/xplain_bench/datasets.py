"""Dataset registry, vendored-CSV loading, and the binning pipeline.

The three benchmark tables are vendored as CSV snapshots under the data
directory; a checksum lockfile written at fetch time guards against silent
drift. `fetch` downloads them when the machine has network access (this is
never done inside tests).

Preparation makes every column categorical: numerical columns are
equal-width binned (`KBinsDiscretizer`, uniform strategy), the per-dataset
passthrough columns keep their raw categories, and string-valued columns
headed for binning are ordinal-encoded first. Continuous targets are
binned with the same bin count so a classifier can be trained.
"""

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

try:  # sklearn emits a FutureWarning for quantile strategies; uniform is fine
    from sklearn.preprocessing import KBinsDiscretizer
except ImportError as err:  # pragma: no cover
    raise ImportError("xplain-bench needs scikit-learn") from err


class MissingFile(Exception):
    """Vendored dataset CSV is absent."""


class MissingColumn(Exception):
    """Dataset CSV lacks one of the registered columns."""


@dataclass(frozen=True)
class DatasetSpec:
    name: str
    filename: str
    target: str
    features: tuple
    passthrough: tuple  # categorical columns kept as-is
    target_kind: str    # "continuous" (binned) or "binary"


REGISTRY = {
    "california": DatasetSpec(
        name="california",
        filename="california.csv",
        target="MedHouseVal",
        features=("MedInc", "HouseAge", "AveRooms", "AveBedrms", "Population",
                  "AveOccup", "Latitude", "Longitude"),
        passthrough=(),
        target_kind="continuous",
    ),
    "bike": DatasetSpec(
        name="bike",
        filename="bike.csv",
        target="cnt",
        features=("season", "yr", "mnth", "hr", "holiday", "weekday",
                  "workingday", "weathersit", "temp", "atemp", "hum",
                  "windspeed"),
        passthrough=("season", "yr", "holiday", "workingday", "weathersit"),
        target_kind="continuous",
    ),
    "adult": DatasetSpec(
        name="adult",
        filename="adult.csv",
        target="income",
        features=("age", "workclass", "fnlwgt", "education", "education-num",
                  "marital-status", "occupation", "relationship", "race",
                  "sex", "capital-gain", "capital-loss", "hours-per-week",
                  "native-country"),
        passthrough=("race", "sex"),
        target_kind="binary",
    ),
}

FETCH_SOURCES = {
    "bike": "https://archive.ics.uci.edu/static/public/275/bike+sharing+dataset.zip",
    "adult": "https://archive.ics.uci.edu/ml/machine-learning-databases/adult/adult.data",
    "california": "sklearn.datasets.fetch_california_housing",
}


def _sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def load_raw(spec, data_dir):
    path = Path(data_dir) / spec.filename
    if not path.exists():
        raise MissingFile(
            f"{path} is missing; run `xplain-bench fetch --data-dir {data_dir}` "
            "on a machine with network access (datasets are never downloaded "
            "inside tests)"
        )
    lock = Path(data_dir) / "checksums.json"
    if lock.exists():
        recorded = json.loads(lock.read_text()).get(spec.filename)
        if recorded and recorded != _sha256(path):
            raise MissingFile(f"{path} does not match its recorded checksum")
    frame = pd.read_csv(path)
    missing = [c for c in spec.features + (spec.target,) if c not in frame.columns]
    if missing:
        raise MissingColumn(f"{spec.name} is missing columns {missing}")
    return frame


@dataclass(frozen=True)
class DiscretizedDataset:
    name: str
    bins: int
    feature_names: tuple
    domains: dict          # feature -> tuple of category codes (ints)
    x_train: np.ndarray    # int codes, shape (n, features)
    x_test: np.ndarray
    y_train: np.ndarray    # int class labels
    y_test: np.ndarray
    n_classes: int
    encoders: dict         # feature -> tuple of original category labels


def _ordinal_codes(column):
    categories = tuple(sorted(column.astype(str).unique()))
    mapping = {c: i for i, c in enumerate(categories)}
    return column.astype(str).map(mapping).to_numpy(dtype=np.int64), categories


def _uniform_bin(values, bins):
    """Equal-width binning; a constant column collapses to one occupied bin.

    Returns integer codes and the domain size actually available. The
    domain is padded to at least two categories so downstream models keep
    a well-formed feature space (the extra category simply never occurs).
    """
    values = np.asarray(values, dtype=float).reshape(-1, 1)
    if np.allclose(values.min(), values.max()):
        return np.zeros(len(values), dtype=np.int64), 2
    discretizer = KBinsDiscretizer(n_bins=bins, encode="ordinal", strategy="uniform")
    codes = discretizer.fit_transform(values).astype(np.int64).ravel()
    width = int(discretizer.n_bins_[0])
    return codes, max(width, 2)


def prepare(spec, bins, data_dir, test_fraction, seed):
    """All-categorical table plus a train/test split."""
    frame = load_raw(spec, data_dir)
    return prepare_frame(spec, frame, bins, test_fraction, seed)


def prepare_frame(spec, frame, bins, test_fraction, seed):
    missing = [c for c in spec.features + (spec.target,) if c not in frame.columns]
    if missing:
        raise MissingColumn(f"{spec.name} is missing columns {missing}")
    features = []
    domains = {}
    encoders = {}
    columns = []
    for name in spec.features:
        column = frame[name]
        if name in spec.passthrough:
            codes, categories = _ordinal_codes(column)
            width = max(len(categories), 2)
            encoders[name] = categories
        else:
            if column.dtype == object:
                codes, categories = _ordinal_codes(column)
                encoders[name] = categories
                codes, width = _uniform_bin(codes, bins)
            else:
                codes, width = _uniform_bin(column.to_numpy(), bins)
        features.append(name)
        domains[name] = tuple(range(width))
        columns.append(codes)
    x = np.stack(columns, axis=1)

    target = frame[spec.target]
    if spec.target_kind == "binary":
        y, target_categories = _ordinal_codes(target)
        n_classes = len(target_categories)
        encoders[spec.target] = target_categories
    else:
        y, _ = _uniform_bin(target.to_numpy(), bins)
        n_classes = int(y.max()) + 1

    rng = np.random.RandomState(seed)
    order = rng.permutation(len(x))
    cut = int(round(len(x) * (1 - test_fraction)))
    train_idx, test_idx = order[:cut], order[cut:]
    return DiscretizedDataset(
        name=spec.name,
        bins=bins,
        feature_names=tuple(features),
        domains=domains,
        x_train=x[train_idx],
        x_test=x[test_idx],
        y_train=y[train_idx],
        y_test=y[test_idx],
        n_classes=max(n_classes, 2),
        encoders=encoders,
    )


def fetch(data_dir, names=None):
    """Download the raw datasets and record their checksums.

    Needs outbound network access; kept out of every test path.
    """
    import io
    import urllib.request
    import zipfile

    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    lock_path = data_dir / "checksums.json"
    lock = json.loads(lock_path.read_text()) if lock_path.exists() else {}
    for name in names or REGISTRY:
        spec = REGISTRY[name]
        out = data_dir / spec.filename
        if name == "california":
            from sklearn.datasets import fetch_california_housing

            bundle = fetch_california_housing(as_frame=True)
            frame = bundle.frame
            frame.to_csv(out, index=False)
        elif name == "bike":
            with urllib.request.urlopen(FETCH_SOURCES["bike"]) as resp:
                payload = resp.read()
            with zipfile.ZipFile(io.BytesIO(payload)) as zf:
                with zf.open("hour.csv") as fh:
                    frame = pd.read_csv(fh)
            frame.to_csv(out, index=False)
        elif name == "adult":
            columns = ["age", "workclass", "fnlwgt", "education", "education-num",
                       "marital-status", "occupation", "relationship", "race",
                       "sex", "capital-gain", "capital-loss", "hours-per-week",
                       "native-country", "income"]
            frame = pd.read_csv(FETCH_SOURCES["adult"], names=columns,
                                skipinitialspace=True)
            frame.to_csv(out, index=False)
        lock[spec.filename] = _sha256(out)
    lock_path.write_text(json.dumps(lock, indent=2, sort_keys=True) + "\n")
    return lock
