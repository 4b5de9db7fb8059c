import json

import pytest

from conftest import all_entities, pointwise_equal, random_categorical_space, random_tree

from xplain.errors import ParseError
from xplain.jsonio import (
    canonical_dumps,
    dump_entity_document,
    dump_model_document,
    parse_entity_document,
    parse_model_document,
)


def _roundtrip(model):
    doc = json.loads(canonical_dumps(dump_model_document(model)))
    return parse_model_document(doc)


def test_tree_roundtrip(film_tree, film_space):
    space, again = _roundtrip(film_tree)
    assert space == film_space
    sample = [
        film_space.entity({"Dur": d, "Rate": r, "Year": y, "Hst": h})
        for d in (90, 121) for r in (0, "0.81", "0.99") for y in (1999, 2005)
        for h in (0, 1)
    ]
    for e in sample:
        assert again.evaluate(e) == film_tree.evaluate(e)


def test_rationals_serialize_as_strings(film_tree):
    doc = dump_model_document(film_tree)
    tests = [n["test"] for n in doc["model"]["nodes"] if "test" in n]
    leqs = [t["leq"] for t in tests if "leq" in t]
    assert "4/5" in leqs and "19/20" in leqs and 120 in leqs


def test_cnf_roundtrip(phi, phi_space):
    space, again = _roundtrip(phi)
    assert space == phi_space
    for e in all_entities(phi_space):
        assert again.evaluate(e) == phi.evaluate(e)


def test_fbdd_roundtrip(diagram):
    space, again = _roundtrip(diagram)
    for e in all_entities(space):
        assert again.evaluate(e) == diagram.evaluate(e)


def test_random_tree_roundtrips(rng):
    for _ in range(10):
        space = random_categorical_space(rng, 4, 3)
        tree = random_tree(rng, space, 8, k=3)
        _, again = _roundtrip(tree)
        assert pointwise_equal(again, tree, space)


def test_random_mixed_tree_roundtrips(rng):
    from fractions import Fraction

    from conftest import random_mixed_space

    grid = (Fraction(1, 2), 1, Fraction(5, 2), 4, Fraction(11, 2))
    for _ in range(10):
        space = random_mixed_space(rng, 2, 2)
        tree = random_tree(rng, space, 8, threshold_grid=grid)
        _, again = _roundtrip(tree)
        assert again.arg == tree.arg and again.feat == tree.feat
        sample = []
        for _ in range(40):
            mapping = {}
            for decl in space.features:
                if decl.is_categorical:
                    mapping[decl.name] = rng.choice(decl.domain)
                else:
                    mapping[decl.name] = Fraction(rng.randint(0, 24), 4)
            sample.append(space.entity(mapping))
        for e in sample:
            assert again.evaluate(e) == tree.evaluate(e)


def test_entity_roundtrip(film_space, film_entity):
    doc = json.loads(canonical_dumps(dump_entity_document(film_entity)))
    again = parse_entity_document(film_space, doc)
    assert again == film_entity
    assert doc["values"]["Rate"] == "17/20"


def test_canonical_json_roundtrips_byte_identically(film_tree, film_entity):
    for doc in (dump_model_document(film_tree), dump_entity_document(film_entity)):
        text = canonical_dumps(doc)
        assert canonical_dumps(json.loads(text)) == text


def test_shared_leaves_expand_to_a_true_tree(phi_space):
    doc = {
        "feature_space": [
            {"id": "x1", "kind": "categorical", "domain": [0, 1]},
            {"id": "x2", "kind": "categorical", "domain": [0, 1]},
        ],
        "model": {
            "kind": "tree", "classes": 2, "root": 0,
            "nodes": [
                {"id": 0, "feature": "x1", "test": {"in": [1]}, "left": 1, "right": 2},
                {"id": 1, "feature": "x2", "test": {"in": [1]}, "left": 9, "right": 8},
                {"id": 2, "feature": "x2", "test": {"in": [0]}, "left": 9, "right": 8},
                {"id": 8, "leaf": 0},
                {"id": 9, "leaf": 1},
            ],
        },
    }
    space, tree = parse_model_document(doc)
    from xplain import validate

    assert validate(tree).ok  # shared leaves were duplicated
    assert tree.size == 7


def test_shared_internal_nodes_rejected():
    doc = {
        "feature_space": [
            {"id": "x1", "kind": "categorical", "domain": [0, 1]},
            {"id": "x2", "kind": "categorical", "domain": [0, 1]},
        ],
        "model": {
            "kind": "tree", "classes": 2, "root": 0,
            "nodes": [
                {"id": 0, "feature": "x1", "test": {"in": [1]}, "left": 1, "right": 1},
                {"id": 1, "feature": "x2", "test": {"in": [1]}, "left": 2, "right": 3},
                {"id": 2, "leaf": 0},
                {"id": 3, "leaf": 1},
            ],
        },
    }
    with pytest.raises(ParseError):
        parse_model_document(doc)


def test_cyclic_tree_rejected():
    doc = {
        "feature_space": [{"id": "x1", "kind": "categorical", "domain": [0, 1]}],
        "model": {
            "kind": "tree", "classes": 2, "root": 0,
            "nodes": [
                {"id": 0, "feature": "x1", "test": {"in": [1]}, "left": 0, "right": 1},
                {"id": 1, "leaf": 1},
            ],
        },
    }
    with pytest.raises(ParseError):
        parse_model_document(doc)


def test_empty_clause_rejected_at_parse(phi_space):
    doc = {
        "feature_space": [{"id": "x1", "kind": "categorical", "domain": [0, 1]}],
        "model": {"kind": "cnf", "clauses": [[]]},
    }
    with pytest.raises(ParseError):
        parse_model_document(doc)


def test_unknown_kind_rejected():
    doc = {
        "feature_space": [{"id": "x1", "kind": "categorical", "domain": [0, 1]}],
        "model": {"kind": "ddnnf"},
    }
    with pytest.raises(ParseError):
        parse_model_document(doc)
