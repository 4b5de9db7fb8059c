"""Hypergraphs and minimal-hitting-set search.

Node order is insertion order and every search iterates nodes and edges in
that order, so all outputs are reproducible. The two structured searches
(`minimal_hitting_set_containing`, `k_minimal_hitting_sets_containing`)
are exponential in the worst case and take a candidate budget; exceeding
it raises BudgetExceeded rather than silently truncating.

A minimal hitting set S always carries a witness per element: for every
v in S some edge B has S & B == {v}; both searches are built around that
observation.
"""

from itertools import product

from .errors import BudgetExceeded, NotAHittingSet, ParseError, UnknownNode

DEFAULT_SEARCH_BUDGET = 10**6


class Hypergraph:
    __slots__ = ("nodes", "edges", "_pos", "_edges_with")

    def __init__(self, nodes, edges):
        self.nodes = tuple(nodes)
        self._pos = {}
        for node in self.nodes:
            if node in self._pos:
                raise ParseError(f"duplicate node {node!r}")
            self._pos[node] = len(self._pos)
        cooked = []
        for edge in edges:
            members = set(edge)
            if not members:
                raise ParseError("empty hyperedge is not allowed")
            for node in members:
                if node not in self._pos:
                    raise UnknownNode(f"edge uses unknown node {node!r}")
            # store sorted by node order for deterministic iteration
            cooked.append(tuple(sorted(members, key=self._pos.__getitem__)))
        self.edges = tuple(cooked)
        edges_with = {node: [] for node in self.nodes}
        for i, edge in enumerate(self.edges):
            for node in edge:
                edges_with[node].append(i)
        self._edges_with = {k: tuple(v) for k, v in edges_with.items()}

    @property
    def size(self):
        """|H| = |V| + sum of edge sizes."""
        return len(self.nodes) + sum(len(e) for e in self.edges)

    def degree(self, node):
        self._check_node(node)
        return len(self._edges_with[node])

    def edges_containing(self, node):
        self._check_node(node)
        return self._edges_with[node]

    def _check_node(self, node):
        if node not in self._pos:
            raise UnknownNode(f"unknown node {node!r}")

    def _check_subset(self, nodes):
        for node in nodes:
            self._check_node(node)

    def sort_nodes(self, nodes):
        return sorted(nodes, key=self._pos.__getitem__)

    def __repr__(self):
        return f"Hypergraph({len(self.nodes)} nodes, {len(self.edges)} edges)"


def is_hitting_set(h, candidate):
    """True iff `candidate` intersects every edge."""
    h._check_subset(candidate)
    members = set(candidate)
    return all(not members.isdisjoint(edge) for edge in h.edges)


def minimize_hitting_set(h, candidate):
    """Shrink a hitting set to a minimal one by iterated removal.

    Removal is attempted in descending node order, so earlier-inserted
    nodes are kept preferentially; the outcome is deterministic.
    """
    if not is_hitting_set(h, candidate):
        raise NotAHittingSet(f"{set(candidate)!r} misses some edge")
    kept = set(candidate)
    for node in reversed(h.sort_nodes(kept)):
        trimmed = kept - {node}
        if all(not trimmed.isdisjoint(edge) for edge in h.edges):
            kept = trimmed
    return frozenset(kept)


def minimal_hitting_set_containing(h, want, budget=None):
    """Some minimal hitting set containing every node of `want`, or None.

    Searches over witness-edge choices: a minimal hitting set S with
    w in S must have an edge B_w with S & B_w == {w}, so it suffices to
    try every combination of one w-containing edge per w and test whether
    the nodes outside union(B_w - {w}) still hit everything.
    """
    want = h.sort_nodes(set(want))
    h._check_subset(want)
    limit = DEFAULT_SEARCH_BUDGET if budget is None else budget
    for node in want:
        if h.degree(node) == 0:
            return None
    all_nodes = set(h.nodes)
    tried = 0
    for choice in product(*(h.edges_containing(w) for w in want)):
        tried += 1
        if tried > limit:
            raise BudgetExceeded(f"witness-edge search passed {limit} candidates")
        excluded = set()
        for w, edge_index in zip(want, choice):
            for node in h.edges[edge_index]:
                if node != w:
                    excluded.add(node)
        candidate = all_nodes - excluded
        if all(not candidate.isdisjoint(edge) for edge in h.edges):
            return minimize_hitting_set(h, candidate)
    return None


def k_minimal_hitting_sets_containing(h, node, k, budget=None):
    """Up to k distinct minimal hitting sets containing `node`.

    Builds them one at a time: the next set must pick a witness edge B
    containing `node` and avoid one element s_i of every set found so
    far, so all (B, s_1..s_i) combinations are tried. Returns fewer than
    k sets only when no more exist.
    """
    h._check_node(node)
    if k < 1:
        raise ParseError(f"k must be positive, got {k}")
    limit = DEFAULT_SEARCH_BUDGET if budget is None else budget
    all_nodes = set(h.nodes)
    witness_edges = h.edges_containing(node)
    found = []
    tried = 0
    while len(found) < k:
        next_set = None
        sorted_found = [h.sort_nodes(s) for s in found]
        for edge_index in witness_edges:
            base_excluded = set(h.edges[edge_index])
            base_excluded.discard(node)
            for picks in product(*sorted_found):
                tried += 1
                if tried > limit:
                    raise BudgetExceeded(f"distinct-set search passed {limit} candidates")
                candidate = all_nodes - base_excluded - set(picks)
                if node not in candidate:
                    continue
                if all(not candidate.isdisjoint(edge) for edge in h.edges):
                    next_set = minimize_hitting_set(h, candidate)
                    break
            if next_set is not None:
                break
        if next_set is None:
            break
        found.append(next_set)
    return found


def remove_superset_edges(h):
    """Keep only inclusion-minimal edges; minimal hitting sets are unchanged."""
    kept = []
    as_sets = [set(e) for e in h.edges]
    for i, edge in enumerate(as_sets):
        keep = True
        for j, other in enumerate(as_sets):
            if i == j:
                continue
            if other < edge:
                keep = False
                break
            if other == edge and j < i:
                keep = False  # duplicate: keep the first occurrence only
                break
        if keep:
            kept.append(h.edges[i])
    return Hypergraph(h.nodes, kept)
