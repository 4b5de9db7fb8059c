import random

import pytest

from conftest import random_hypergraph

from xplain import (
    Hypergraph,
    is_hitting_set,
    k_minimal_hitting_sets_containing,
    minimal_hitting_set_containing,
    minimize_hitting_set,
    remove_superset_edges,
)
from xplain.errors import BudgetExceeded, NotAHittingSet, ParseError, UnknownNode
from xplain.oracle import enumerate_minimal_hitting_sets


def test_size_and_degree(phi_hypergraph):
    h = phi_hypergraph
    assert h.size == 5 + (1 + 2 + 3 + 2)
    assert h.degree("x2") == 3
    assert h.degree("x1") == 1


def test_empty_edge_rejected():
    with pytest.raises(ParseError):
        Hypergraph(("a",), [()])


def test_is_hitting_set(phi_hypergraph):
    assert is_hitting_set(phi_hypergraph, {"x2", "x3"})
    assert not is_hitting_set(phi_hypergraph, {"x3", "x4"})  # misses edge {x2}
    assert is_hitting_set(phi_hypergraph, set(phi_hypergraph.nodes))
    with pytest.raises(UnknownNode):
        is_hitting_set(phi_hypergraph, {"zz"})


def test_minimize_hitting_set(phi_hypergraph):
    assert minimize_hitting_set(phi_hypergraph, set(phi_hypergraph.nodes)) == {"x2", "x3"}
    assert minimize_hitting_set(phi_hypergraph, {"x2", "x3"}) == {"x2", "x3"}
    two = Hypergraph(("a", "b"), [("a", "b")])
    assert minimize_hitting_set(two, {"a", "b"}) == {"a"}
    with pytest.raises(NotAHittingSet):
        minimize_hitting_set(phi_hypergraph, {"x3", "x4"})


def test_minimal_hitting_set_containing(phi_hypergraph):
    assert minimal_hitting_set_containing(phi_hypergraph, {"x2", "x3"}) == {"x2", "x3"}
    assert minimal_hitting_set_containing(phi_hypergraph, {"x1"}) is None
    found = minimal_hitting_set_containing(phi_hypergraph, set())
    assert found is not None and is_hitting_set(phi_hypergraph, found)


def test_containing_never_none_on_empty_want():
    h = Hypergraph(("a", "b", "c"), [("a", "b"), ("c",)])
    assert minimal_hitting_set_containing(h, set()) is not None
    empty = Hypergraph(("a",), [])
    assert minimal_hitting_set_containing(empty, set()) == frozenset()


def test_k_minimal_hitting_sets(phi_hypergraph):
    two = k_minimal_hitting_sets_containing(phi_hypergraph, "x2", 2)
    assert {frozenset(s) for s in two} == {frozenset({"x2", "x3"}), frozenset({"x2", "x4"})}
    three = k_minimal_hitting_sets_containing(phi_hypergraph, "x2", 3)
    assert len(three) == 2
    single = Hypergraph(("v",), [("v",)])
    assert k_minimal_hitting_sets_containing(single, "v", 1) == [frozenset({"v"})]


def test_remove_superset_edges(phi_hypergraph):
    reduced = remove_superset_edges(phi_hypergraph)
    assert {frozenset(e) for e in reduced.edges} == {frozenset({"x2"}), frozenset({"x3", "x4"})}
    antichain = Hypergraph(("a", "b", "c"), [("a", "b"), ("b", "c")])
    assert remove_superset_edges(antichain).edges == antichain.edges
    doubled = Hypergraph(("a", "b"), [("a", "b"), ("b", "a")])
    assert len(remove_superset_edges(doubled).edges) == 1


def test_budget_exceeded_is_loud():
    nodes = tuple(f"n{i}" for i in range(8))
    edges = [nodes] * 8  # degree 8 everywhere
    h = Hypergraph(nodes, edges)
    with pytest.raises(BudgetExceeded):
        minimal_hitting_set_containing(h, set(nodes[:6]), budget=10)


def test_searches_match_exhaustive_enumeration_on_random_corpus():
    rng = random.Random(12)
    for trial in range(150):
        h = random_hypergraph(rng, max_nodes=12 if trial % 5 == 0 else 6, max_edges=6)
        truth = enumerate_minimal_hitting_sets(h)
        # membership-constrained search
        want = set(rng.sample(h.nodes, rng.randint(0, min(2, len(h.nodes)))))
        found = minimal_hitting_set_containing(h, want)
        expected_exists = any(want <= mhs for mhs in truth)
        assert (found is not None) == expected_exists
        if found is not None:
            assert found in truth and want <= found
        # k distinct sets through one node
        node = rng.choice(h.nodes)
        k = rng.randint(1, 4)
        sets = k_minimal_hitting_sets_containing(h, node, k)
        with_node = {mhs for mhs in truth if node in mhs}
        assert len(sets) == min(k, len(with_node))
        assert len(set(sets)) == len(sets)
        for s in sets:
            assert s in with_node
        # superset removal preserves the minimal hitting sets
        assert enumerate_minimal_hitting_sets(remove_superset_edges(h)) == truth


def test_minimality_witness_property():
    rng = random.Random(13)
    for _ in range(80):
        h = random_hypergraph(rng, max_nodes=6, max_edges=5)
        found = minimal_hitting_set_containing(h, set())
        assert found is not None
        for v in found:
            assert any(set(edge) & found == {v} for edge in h.edges)
            assert not is_hitting_set(h, found - {v})
