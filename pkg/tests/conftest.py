"""Shared fixtures: the two running examples and random-model generators."""

import random
from itertools import product

import pytest

from xplain import (
    CnfFormula,
    DecisionTree,
    FeatureDecl,
    FeatureSpace,
    Hypergraph,
    Literal,
)
from xplain.fbdd import F_LEAF, F_NODE, Fbdd


# -- the CNF running example -------------------------------------------------

def binary_space(names):
    return FeatureSpace(tuple(FeatureDecl.categorical(n, (0, 1)) for n in names))


def pos(name):
    return Literal(name, "in", frozenset((1,)))


def neg(name):
    return Literal(name, "in", frozenset((0,)))


@pytest.fixture(scope="session")
def phi_space():
    return binary_space(["x1", "x2", "x3", "x4", "x5"])


@pytest.fixture(scope="session")
def phi(phi_space):
    return CnfFormula(
        phi_space,
        [
            (pos("x1"), neg("x2"), pos("x5")),
            (pos("x2"), pos("x3"), pos("x4")),
            (neg("x2"), pos("x4"), neg("x5")),
            (neg("x1"), neg("x2"), pos("x5")),
        ],
    )


@pytest.fixture(scope="session")
def phi_entity(phi_space):
    return phi_space.entity({"x1": 0, "x2": 0, "x3": 1, "x4": 1, "x5": 0})


@pytest.fixture(scope="session")
def phi_hypergraph():
    return Hypergraph(
        ("x1", "x2", "x3", "x4", "x5"),
        [("x2",), ("x3", "x4"), ("x2", "x4", "x5"), ("x1", "x2")],
    )


# -- the film-recommendation tree --------------------------------------------

@pytest.fixture(scope="session")
def film_space():
    return FeatureSpace.of(
        FeatureDecl.numerical("Dur", 0, "inf"),
        FeatureDecl.numerical("Rate", 0, 1),
        FeatureDecl.numerical("Year", 1888, "inf"),
        FeatureDecl.categorical("Hst", (0, 1)),
    )


@pytest.fixture(scope="session")
def film_tree(film_space):
    return DecisionTree.from_nested(
        film_space,
        2,
        {
            "feature": "Dur", "leq": 120,
            "left": {
                "feature": "Rate", "leq": "0.8",
                "left": {
                    "feature": "Year", "leq": 2000,
                    "left": {"leaf": 0}, "right": {"leaf": 1},
                },
                "right": {"leaf": 1},
            },
            "right": {
                "feature": "Rate", "leq": "0.95",
                "left": {"leaf": 0},
                "right": {
                    "feature": "Hst", "in": [0],
                    "left": {"leaf": 0}, "right": {"leaf": 1},
                },
            },
        },
    )


@pytest.fixture(scope="session")
def film_entity(film_space):
    return film_space.entity({"Dur": 90, "Rate": "0.85", "Year": 2005, "Hst": 0})


# -- a small shared-leaf diagram over the binary features ---------------------

@pytest.fixture(scope="session")
def diagram(phi_space):
    sp = phi_space
    kind = [F_LEAF, F_LEAF, F_NODE, F_NODE, F_NODE, F_NODE]
    feat = [-1, -1, sp.position("x4"), sp.position("x3"),
            sp.position("x5"), sp.position("x2")]
    arg = [0, 1, -1, -1, -1, -1]
    left = [-1, -1, 0, 2, 2, 3]
    right = [-1, -1, 1, 1, 1, 4]
    return Fbdd(sp, kind, feat, arg, left, right, 5)


# -- enumeration helpers -------------------------------------------------------

def all_entities(space):
    domains = [d.domain for d in space.features]
    for combo in product(*domains):
        yield space.entity(dict(zip(space.names, combo)))


def pointwise_equal(m1, m2, space=None):
    space = space or m1.space
    return all(m1.evaluate(e) == m2.evaluate(e) for e in all_entities(space))


# -- random generators ---------------------------------------------------------

def random_categorical_space(rng, n_features, max_domain=3):
    decls = []
    for i in range(n_features):
        size = rng.randint(2, max_domain)
        decls.append(FeatureDecl.categorical(f"f{i}", tuple(range(size))))
    return FeatureSpace(tuple(decls))


def random_mixed_space(rng, n_cat, n_num, max_domain=3, num_lo=0, num_hi=6):
    decls = []
    for i in range(n_cat):
        size = rng.randint(2, max_domain)
        decls.append(FeatureDecl.categorical(f"c{i}", tuple(range(size))))
    for i in range(n_num):
        decls.append(FeatureDecl.numerical(f"n{i}", num_lo, num_hi))
    return FeatureSpace(tuple(decls))


def random_tree(rng, space, max_internal=7, k=2, threshold_grid=(1, 2, 3, 4, 5)):
    budget = [rng.randint(1, max_internal)]

    def grow():
        if budget[0] <= 0 or rng.random() < 0.25:
            return {"leaf": rng.randrange(k)}
        budget[0] -= 1
        decl = space.features[rng.randrange(len(space.features))]
        if decl.is_categorical:
            size = rng.randint(1, len(decl.domain) - 1)
            values = rng.sample(decl.domain, size)
            return {"feature": decl.name, "in": list(values),
                    "left": grow(), "right": grow()}
        threshold = rng.choice(threshold_grid)
        return {"feature": decl.name, "leq": threshold,
                "left": grow(), "right": grow()}

    return DecisionTree.from_nested(space, k, grow())


def random_accepted_instance(rng, n_features=4, max_domain=3, max_internal=7, k=2):
    """A boolean tree plus an entity it accepts (prediction 1)."""
    while True:
        space = random_categorical_space(rng, n_features, max_domain)
        tree = random_tree(rng, space, max_internal, k=k)
        accepted = [e for e in all_entities(space) if tree.evaluate(e) == 1]
        if accepted:
            return space, tree, rng.choice(accepted)


def random_fbdd(rng, space, leaf_prob=0.25, share_prob=0.2):
    kind = [F_LEAF, F_LEAF]
    feat = [-1, -1]
    arg = [0, 1]
    left = [-1, -1]
    right = [-1, -1]
    built = []  # (node id, frozenset of feature positions used below)

    def grow(avail):
        if not avail or rng.random() < leaf_prob:
            return rng.choice((0, 1))
        if built and rng.random() < share_prob:
            candidates = [nid for nid, used in built if used <= avail]
            if candidates:
                return rng.choice(candidates)
        position = space.position(rng.choice(sorted(avail)))
        rest = avail - {space.names[position]}
        lid = grow(rest)
        rid = grow(rest)
        kind.append(F_NODE)
        feat.append(position)
        arg.append(-1)
        left.append(lid)
        right.append(rid)
        nid = len(kind) - 1
        used = {position}
        for child in (lid, rid):
            if child > 1:
                used |= next(u for cid, u in built if cid == child)
        built.append((nid, frozenset(used)))
        return nid

    root = grow(set(space.names))
    if root in (0, 1):
        label = arg[root]
        return Fbdd(space, [F_LEAF], [-1], [label], [-1], [-1], 0)
    # drop unreachable nodes (unused shared leaves and dead shares)
    reachable = set()
    stack = [root]
    while stack:
        v = stack.pop()
        if v in reachable:
            continue
        reachable.add(v)
        if kind[v] == F_NODE:
            stack.append(left[v])
            stack.append(right[v])
    remap = {}
    nk, nf, na, nl, nr = [], [], [], [], []
    for v in range(len(kind)):
        if v in reachable:
            remap[v] = len(nk)
            nk.append(kind[v])
            nf.append(feat[v])
            na.append(arg[v])
            nl.append(left[v])
            nr.append(right[v])
    for i in range(len(nk)):
        if nk[i] == F_NODE:
            nl[i] = remap[nl[i]]
            nr[i] = remap[nr[i]]
        else:
            nl[i] = nr[i] = -1
    return Fbdd(space, nk, nf, na, nl, nr, remap[root])


def random_hypergraph(rng, max_nodes=6, max_edges=6):
    n = rng.randint(1, max_nodes)
    nodes = tuple(f"v{i}" for i in range(n))
    edges = []
    for _ in range(rng.randint(0, max_edges)):
        size = rng.randint(1, n)
        edges.append(tuple(rng.sample(nodes, size)))
    return Hypergraph(nodes, edges)


@pytest.fixture
def rng():
    return random.Random(20250810)
