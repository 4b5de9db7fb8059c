"""Benchmark front end.

`xplain-bench run --config configs/experiment.json` reproduces the full
pipeline: discretize, train capped trees, export + CLI-validate, score
via the engine CLI, compute SHAP importances, and write score tables,
ranking-comparison tables and plots. `fetch` downloads the raw datasets
(network required) and records checksums; `shap-bench` times the compiled
SHAP kernel against the pure-Python twin.
"""

import argparse
import json
import sys
import time
from pathlib import Path

from .config import ExperimentConfig, load_config
from .datasets import REGISTRY, fetch
from .harness import (
    compare_rankings,
    train_and_export,
    write_comparison_table,
    write_score_table,
)
from .plots import score_panels


def _cmd_run(args):
    config = load_config(args.config) if args.config else ExperimentConfig()
    out_dir = Path(config.out_dir)
    comparisons = []
    for dataset in config.datasets:
        records = train_and_export(config, dataset)
        write_score_table(records, out_dir / f"scores-{dataset}.csv")
        score_panels(records, out_dir / f"scores-{dataset}.png", title=dataset)
        six_bin = [r for r in records if r.bins == 6]
        if six_bin:
            comparisons.append(compare_rankings(six_bin))
        print(f"{dataset}: {len(records)} models trained and scored")
    if comparisons:
        table = write_comparison_table(comparisons, out_dir / "ranking-comparison.csv")
        print(f"ranking comparison written to {table}")
        for comparison in comparisons:
            row = ", ".join(f"top-{k}: {v:.2f}" for k, v in sorted(comparison.averages.items()))
            print(f"  {comparison.dataset} (6 bins): {row}")
    return 0


def _cmd_fetch(args):
    lock = fetch(args.data_dir, args.datasets or None)
    print(json.dumps(lock, indent=2, sort_keys=True))
    return 0


def _cmd_shap_bench(args):
    """Compare the compiled kernel against the pure-Python twin."""
    import numpy as np
    from sklearn.tree import DecisionTreeClassifier

    from . import treeshap

    rng = np.random.RandomState(0)
    x = rng.randint(0, 6, size=(args.rows, 12)).astype(float)
    y = ((x[:, 2] > 2).astype(int) + (x[:, 7] % 2)).astype(int)
    clf = DecisionTreeClassifier(max_leaf_nodes=400, random_state=0).fit(x, y)
    arrays = treeshap.TreeArrays.from_sklearn(clf)

    treeshap.shap_values(arrays, x[:1])  # compile before timing
    start = time.perf_counter()
    compiled = treeshap.shap_values(arrays, x)
    compiled_time = time.perf_counter() - start

    import importlib
    import os

    os.environ["BENCH_NO_NUMBA"] = "1"
    pure = importlib.reload(treeshap)
    start = time.perf_counter()
    plain = pure.shap_values(pure.TreeArrays.from_sklearn(clf), x[: args.pure_rows])
    pure_time = (time.perf_counter() - start) * (args.rows / max(args.pure_rows, 1))
    os.environ.pop("BENCH_NO_NUMBA")
    importlib.reload(pure)

    agree = np.allclose(compiled[: args.pure_rows], plain, atol=1e-9)
    print(f"rows={args.rows}  compiled: {compiled_time:.3f}s  "
          f"pure-python (extrapolated): {pure_time:.1f}s  "
          f"speedup x{pure_time / max(compiled_time, 1e-9):.0f}  agree={agree}")
    return 0 if agree else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="xplain-bench")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="full benchmark pipeline")
    run_p.add_argument("--config", default=None,
                       help="JSON or TOML experiment config")

    fetch_p = sub.add_parser("fetch", help="download raw datasets (needs network)")
    fetch_p.add_argument("--data-dir", default="data")
    fetch_p.add_argument("datasets", nargs="*", choices=list(REGISTRY) + [[]],
                         help="subset of datasets (default: all)")

    bench_p = sub.add_parser("shap-bench", help="compiled vs pure-python SHAP kernel")
    bench_p.add_argument("--rows", type=int, default=4000)
    bench_p.add_argument("--pure-rows", type=int, default=50)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "fetch":
        return _cmd_fetch(args)
    if args.command == "shap-bench":
        return _cmd_shap_bench(args)
    return 2


def run():
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
