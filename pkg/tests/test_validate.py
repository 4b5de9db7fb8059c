import pytest

from xplain import CnfFormula, DecisionTree, FeatureDecl, FeatureSpace, validate
from xplain.literals import make_in
from xplain.tree import K_CAT, K_LEAF, K_NUM


@pytest.fixture
def space():
    return FeatureSpace.of(
        FeatureDecl.categorical("c", (0, 1, 2)),
        FeatureDecl.numerical("n", 0, 10),
    )


def _tree(space, kind, feat, arg, left, right, root, k=2):
    return DecisionTree(space, k, kind, feat, arg, left, right, root)


def test_cycle_is_reported(space):
    c = space.position("c")
    t = _tree(space, [K_CAT, K_CAT, K_LEAF], [c, c, -1], [1, 1, 0],
              [1, 0, -1], [2, 2, -1], 0)
    codes = {f.code for f in validate(t).findings}
    assert "cycle" in codes


def test_shared_node_is_reported(space):
    c = space.position("c")
    t = _tree(space, [K_CAT, K_LEAF, K_LEAF], [c, -1, -1], [1, 0, 1],
              [1, -1, -1], [1, -1, -1], 0)  # both children point at node 1
    codes = {f.code for f in validate(t).findings}
    assert codes  # shared child shows up as cycle/parent-count/unreachable
    assert "cycle" in codes or "parent-count" in codes


def test_full_and_empty_categorical_tests(space):
    c = space.position("c")
    full = _tree(space, [K_CAT, K_LEAF, K_LEAF], [c, -1, -1], [0b111, 0, 1],
                 [1, -1, -1], [2, -1, -1], 0)
    assert any(f.code == "full-test" for f in validate(full).findings)
    empty = _tree(space, [K_CAT, K_LEAF, K_LEAF], [c, -1, -1], [0, 0, 1],
                  [1, -1, -1], [2, -1, -1], 0)
    assert any(f.code == "empty-test" for f in validate(empty).findings)


def test_out_of_range_leaf_label(space):
    t = _tree(space, [K_LEAF], [-1], [5], [-1], [-1], 0, k=3)
    assert any(f.code == "bad-leaf-label" for f in validate(t).findings)


def test_bad_threshold(space):
    n = space.position("n")
    t = _tree(space, [K_NUM, K_LEAF, K_LEAF], [n, -1, -1], [10, 0, 1],
              [1, -1, -1], [2, -1, -1], 0)  # threshold must be < hi
    assert any(f.code == "bad-threshold" for f in validate(t).findings)


def test_tautological_clause_finding(space):
    cnf = CnfFormula(space, [(make_in("c", (0,)), make_in("c", (1, 2)))],
                     _skip_checks=True)
    assert any(f.code == "tautological-clause" for f in validate(cnf).findings)


def test_valid_models_have_empty_reports(film_tree, phi, diagram):
    assert validate(film_tree).ok
    assert validate(phi).ok
    assert validate(diagram).ok
