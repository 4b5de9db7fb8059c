"""Feature relevancy and its two generalizations.

All queries go through the reason hypergraph: a feature is relevant for a
prediction iff some minimal hitting set contains it, a witness sufficient
reason is a minimal hitting set through the feature, and the structured /
counting generalizations delegate to the corresponding hitting-set
searches. k-class trees are booleanized on the predicted class inside
reason_hypergraph; the raw hypergraph is never exposed un-relabeled.
"""

from dataclasses import dataclass

from .hypergraph import (
    k_minimal_hitting_sets_containing,
    minimal_hitting_set_containing,
    remove_superset_edges,
)
from .reasons import reason_hypergraph


@dataclass(frozen=True)
class RelevanceAnswer:
    feature: str
    relevant: bool
    witness: frozenset | None  # a sufficient reason containing the feature


@dataclass(frozen=True)
class CountOrMore:
    """Up to k sufficient reasons through a feature; at_least means the
    search stopped at k and the true count may be larger."""

    reasons: tuple
    at_least: bool

    @property
    def count(self):
        return len(self.reasons)


def is_relevant(model, entity, feature, budget=None):
    model.space.feature(feature)  # raises UnknownFeature
    rh = reason_hypergraph(model, entity)
    witness = minimal_hitting_set_containing(rh.hypergraph, (feature,), budget)
    return RelevanceAnswer(feature, witness is not None, witness)


def all_relevant(model, entity):
    """Union of the inclusion-minimal edges of the reason hypergraph."""
    rh = reason_hypergraph(model, entity)
    minimal = remove_superset_edges(rh.hypergraph)
    out = set()
    for edge in minimal.edges:
        out.update(edge)
    return frozenset(out)


def sufficient_reason_containing(model, entity, features, budget=None):
    """Some sufficient reason containing all of `features`, or None."""
    rh = reason_hypergraph(model, entity)
    return minimal_hitting_set_containing(rh.hypergraph, features, budget)


def count_sufficient_reasons_with(model, entity, feature, k, budget=None):
    """Up to k distinct sufficient reasons containing `feature`."""
    model.space.feature(feature)
    rh = reason_hypergraph(model, entity)
    sets = k_minimal_hitting_sets_containing(rh.hypergraph, feature, k, budget)
    return CountOrMore(tuple(sets), len(sets) == k)
