import json

import numpy as np
from sklearn.tree import DecisionTreeClassifier

from xplain_bench.export import model_document, predict_document, write_model
from xplain_bench.harness import run_cli


def _fit(prepared, leaf_cap=24, seed=0):
    clf = DecisionTreeClassifier(max_leaf_nodes=leaf_cap, random_state=seed)
    return clf.fit(prepared.x_train, prepared.y_train)


def test_exported_tree_reproduces_predictions_exactly(prepared):
    clf = _fit(prepared)
    doc = model_document(clf, prepared.feature_names, prepared.domains,
                         prepared.n_classes)
    mine = predict_document(doc, prepared.x_train, list(prepared.feature_names))
    assert np.array_equal(mine, clf.predict(prepared.x_train))
    mine = predict_document(doc, prepared.x_test, list(prepared.feature_names))
    assert np.array_equal(mine, clf.predict(prepared.x_test))


def test_exported_model_passes_cli_validation(tmp_path, prepared):
    clf = _fit(prepared)
    path = tmp_path / "model.json"
    write_model(path, clf, prepared.feature_names, prepared.domains,
                prepared.n_classes)
    code, out, err = run_cli("validate", str(path), "--output", "json")
    assert code == 0, err
    report = json.loads(out)
    assert report["ok"] is True


def test_engine_agrees_with_sklearn_on_every_training_row(tmp_path, prepared):
    # evaluate through the engine library for a double parity check
    from xplain.jsonio import parse_model_document

    clf = _fit(prepared)
    doc = model_document(clf, prepared.feature_names, prepared.domains,
                         prepared.n_classes)
    space, tree = parse_model_document(doc)
    predictions = clf.predict(prepared.x_train)
    for row, expected in zip(prepared.x_train[:300], predictions[:300]):
        entity = space.entity({
            name: int(value) for name, value in zip(prepared.feature_names, row)
        })
        assert tree.evaluate(entity) == expected


def test_leaf_cap_is_respected(prepared):
    clf = _fit(prepared, leaf_cap=15)
    assert clf.get_n_leaves() <= 15


def test_cli_scores_exported_model(tmp_path, prepared):
    clf = _fit(prepared, leaf_cap=12)
    path = tmp_path / "model.json"
    write_model(path, clf, prepared.feature_names, prepared.domains,
                prepared.n_classes)
    code, out, err = run_cli("score", str(path), "--all", "--output", "json")
    assert code == 0, err
    report = json.loads(out)
    assert set(report["ranking"]) == set(prepared.feature_names)
    total = 1
    for name in prepared.feature_names:
        total *= len(prepared.domains[name])
    assert all(row["total_entities"] == total for row in report["scores"])
