"""Export fitted sklearn trees to the explanation engine's JSON format.

All features are small integer category codes after preparation, so every
sklearn split `X[:, f] <= t` becomes the categorical set test
`f in {codes <= t}` over the declared domain. Leaf labels are the argmax
class mapped back through clf.classes_, so the exported tree reproduces
clf.predict exactly.
"""

import json

import numpy as np


def feature_space_document(feature_names, domains):
    return [
        {"id": name, "kind": "categorical", "domain": [int(v) for v in domains[name]]}
        for name in feature_names
    ]


def tree_document(clf, feature_names, domains, n_classes):
    tree = clf.tree_
    classes = clf.classes_
    nodes = []
    for node in range(tree.node_count):
        if tree.children_left[node] < 0:
            label = int(classes[int(np.argmax(tree.value[node, 0]))])
            nodes.append({"id": int(node), "leaf": label})
            continue
        name = feature_names[tree.feature[node]]
        threshold = tree.threshold[node]
        in_values = [int(v) for v in domains[name] if v <= threshold]
        nodes.append(
            {
                "id": int(node),
                "feature": name,
                "test": {"in": in_values},
                "left": int(tree.children_left[node]),
                "right": int(tree.children_right[node]),
            }
        )
    return {"kind": "tree", "classes": int(n_classes), "root": 0, "nodes": nodes}


def model_document(clf, feature_names, domains, n_classes):
    return {
        "feature_space": feature_space_document(feature_names, domains),
        "model": tree_document(clf, feature_names, domains, n_classes),
    }


def write_model(path, clf, feature_names, domains, n_classes):
    doc = model_document(clf, feature_names, domains, n_classes)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return doc


def predict_document(doc, rows, feature_names):
    """Evaluate an exported tree document on integer-code rows (for parity
    checks without importing the engine)."""
    nodes = {n["id"]: n for n in doc["model"]["nodes"]}
    out = []
    for row in rows:
        node = nodes[doc["model"]["root"]]
        while "leaf" not in node:
            value = int(row[feature_names.index(node["feature"])])
            node = nodes[node["left"] if value in node["test"]["in"] else node["right"]]
        out.append(node["leaf"])
    return np.array(out)
