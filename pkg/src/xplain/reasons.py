"""Reason machinery: entity-restricted CNFs and the reason hypergraph.

A set of features S is a reason for a prediction iff fixing S to the
entity's values forces the class; the sufficient reasons (inclusion-minimal
reasons) of an accepted entity are exactly the minimal hitting sets of the
hypergraph whose edges are the variable sets of the entity-restricted
clauses. Trees enter through their path CNF; k-class trees are first
booleanized on the predicted class, which preserves the sufficient reasons.
"""

from dataclasses import dataclass

from .cnf import CnfFormula, normalize_clauses
from .errors import (
    DuplicateEntity,
    EntityRejected,
    NonCategoricalFeature,
    NotBoolean,
    ParseError,
)
from .hypergraph import Hypergraph
from .space import Entity, FeatureDecl, FeatureSpace
from .tree import K_CAT, K_LEAF, DecisionTree, TreeBuilder


def tree_to_path_cnf(t):
    """One clause per root-to-0-leaf path: the negated path term.

    Clauses coming from logically dead paths (unsatisfiable path terms)
    would be tautologically true and are dropped; the conjunction is
    unchanged.
    """
    if t.k != 2:
        raise NotBoolean("path CNF is defined for boolean trees")
    from .literals import IN, LEQ, Literal

    names = t.space.names
    clauses = []
    # iterative DFS carrying the clause-literal prefix of the current path
    stack = [(t.root, ())]
    while stack:
        v, prefix = stack.pop()
        if t.kind[v] == K_LEAF:
            if t.arg[v] == 0:
                seen = []
                for lit in prefix:
                    if lit not in seen:
                        seen.append(lit)
                clauses.append(tuple(seen))
            continue
        name = names[t.feat[v]]
        if t.kind[v] == K_CAT:
            lit = Literal(name, IN, frozenset(t.space.mask_values(t.feat[v], t.arg[v])))
        else:
            lit = Literal(name, LEQ, t.arg[v])
        # going left satisfies l(v), so the 0-path clause takes its negation
        stack.append((t.left[v], prefix + (lit.negate(),)))
        stack.append((t.right[v], prefix + (lit,)))
    return CnfFormula(t.space, normalize_clauses(t.space, clauses), _skip_checks=True)


@dataclass(frozen=True)
class RestrictedCnf:
    """Per-clause literals satisfied by the entity (clauses may be empty)."""

    clauses: tuple
    empty_clause_indices: tuple

    @property
    def rejects_entity(self):
        return bool(self.empty_clause_indices)


def restrict_cnf_to_entity(cnf, entity):
    raw = entity.raw
    holds = cnf._literal_holds
    clauses = []
    empties = []
    for i, (clause, compiled) in enumerate(zip(cnf.clauses, cnf._compile())):
        kept = tuple(
            lit for lit, entry in zip(clause, compiled) if holds(entry, raw)
        )
        clauses.append(kept)
        if not kept:
            empties.append(i)
    return RestrictedCnf(tuple(clauses), tuple(empties))


@dataclass(frozen=True)
class ReasonHypergraph:
    """Hypergraph over features whose minimal hitting sets are the
    sufficient reasons; provenance maps each edge to the restricted-clause
    indices that produced it."""

    hypergraph: Hypergraph
    provenance: tuple

    @property
    def edges(self):
        return self.hypergraph.edges


def reason_hypergraph(model, entity):
    """Build the reason hypergraph of `model` on `entity`.

    The booleanized model must accept the entity; a k-class tree is
    booleanized on its own prediction, so it always does. A CNF model must
    satisfy cnf(entity) = 1 or EntityRejected is raised.
    """
    cnf = _as_accepting_cnf(model, entity)
    restricted = restrict_cnf_to_entity(cnf, entity)
    if restricted.rejects_entity:
        raise EntityRejected(
            f"restriction produced empty clauses {restricted.empty_clause_indices}"
        )
    space = model.space
    edges = []
    provenance = []
    seen = {}
    for i, clause in enumerate(restricted.clauses):
        variables = frozenset(lit.feature for lit in clause)
        if variables in seen:
            provenance[seen[variables]] = provenance[seen[variables]] + (i,)
        else:
            seen[variables] = len(edges)
            edges.append(variables)
            provenance.append((i,))
    h = Hypergraph(space.names, edges)
    return ReasonHypergraph(h, tuple(provenance))


def _as_accepting_cnf(model, entity):
    if isinstance(model, DecisionTree):
        predicted = model.evaluate(entity)
        boolean = model if model.k == 2 and predicted == 1 else model.booleanize(predicted)
        return tree_to_path_cnf(boolean)
    if isinstance(model, CnfFormula):
        return model
    raise ParseError(
        f"reason queries support trees and CNF formulas, not {type(model).__name__}"
    )


def is_reason(model, entity, features):
    """True iff fixing `features` to the entity's values forces the class."""
    rh = reason_hypergraph(model, entity)
    members = set(features)
    return all(not members.isdisjoint(edge) for edge in rh.edges)


def is_sufficient_reason(model, entity, features):
    rh = reason_hypergraph(model, entity)
    members = set(features)
    edges = rh.edges
    if any(members.isdisjoint(edge) for edge in edges):
        return False
    for x in members:
        trimmed = members - {x}
        if all(not trimmed.isdisjoint(edge) for edge in edges):
            return False
    return True


def sparse_model_to_tree(accepted, space):
    """Boolean tree accepting exactly the listed entities (all-categorical).

    Grown by following each entity to the rejecting leaf it currently
    reaches and grafting a full test chain for it there.
    """
    for decl in space.features:
        if not decl.is_categorical:
            raise NonCategoricalFeature(
                f"sparse models need categorical features, {decl.name!r} is numerical"
            )
    if len(set(e.raw for e in accepted)) != len(accepted):
        raise DuplicateEntity("accepted entities must be pairwise distinct")
    builder = TreeBuilder(space)
    root = builder.add_leaf(0)
    for entity in accepted:
        if entity.space != space:
            raise ParseError("entity belongs to a different feature space")
        # walk to the 0-leaf this entity currently reaches
        v = root
        while builder.kind[v] != K_LEAF:
            f = builder.feat[v]
            if (builder.arg[v] >> entity.raw[f]) & 1:
                v = builder.left[v]
            else:
                v = builder.right[v]
        assert builder.arg[v] == 0, "duplicate entity slipped through"
        # graft a chain fixing every feature to the entity's value
        chain_root = None
        attach = None  # (node, as_left)
        for pos, decl in enumerate(space.features):
            value = decl.domain[entity.raw[pos]]
            reject = builder.add_leaf(0)
            node = builder.add_cat(decl.name, (value,), -1, reject)
            if attach is None:
                chain_root = node
            else:
                builder.left[attach] = node
            attach = node
        builder.left[attach] = builder.add_leaf(1)
        builder.replace_with_subtree(
            v,
            builder.kind[chain_root],
            builder.feat[chain_root],
            builder.arg[chain_root],
            builder.left[chain_root],
            builder.right[chain_root],
        )
    return builder.build(root, k=2)


def hypergraph_to_tree_instance(h):
    """A boolean tree and entity whose sufficient reasons are MHS(h).

    The model rejects exactly one entity per distinct edge B (zero on B,
    one elsewhere); it is materialized through sparse_model_to_tree and a
    leaf complement, and paired with the all-ones entity.
    """
    if not h.nodes:
        raise ParseError("hypergraph must have a nonempty node set")
    space = FeatureSpace(
        tuple(FeatureDecl.categorical(str(node), (0, 1)) for node in h.nodes)
    )
    rejected = []
    seen = set()
    for edge in h.edges:
        members = frozenset(edge)
        if members in seen:
            continue
        seen.add(members)
        rejected.append(
            Entity(space, {str(n): (0 if n in members else 1) for n in h.nodes})
        )
    complement = sparse_model_to_tree(rejected, space)
    entity = Entity(space, {str(n): 1 for n in h.nodes})
    return complement.negate(), entity
