"""Usefulness: model counting, equivalence, and the usefulness score.

The score of a feature is the number of entities for which it is
necessary; by the flip characterization it equals
total - sum_c CT(AND_b M^c_{x=b}), two model-counting calls per class,
with the conjunction built by iterated `conjoin`. Counts are exact
arbitrary-precision integers. Equivalence of comparison-based models over
numerical features is decided over their joint threshold cells (each cell
weighted 1, since only emptiness matters).
"""

from dataclasses import dataclass

from .cnf import CnfFormula
from .errors import (
    BudgetExceeded,
    FeatureSpaceMismatch,
    NonCategoricalFeature,
    NotBoolean,
    ParseError,
)
from .fbdd import Fbdd, unfold_to_tree
from .necessity import cell_representatives
from .space import FeatureDecl, FeatureSpace
from .tree import K_CAT, K_LEAF, DecisionTree, TreeBuilder, conjoin

DEFAULT_CONVERSION_BUDGET = 200_000

_VISIT, _SET_MASK = 0, 1


def model_count(t):
    """CT(t): number of accepted entities of a boolean all-categorical tree.

    One traversal with per-path residual-domain bookkeeping; infeasible
    branches contribute nothing.
    """
    if not isinstance(t, DecisionTree):
        raise ParseError("model counting is defined for decision trees")
    if t.k != 2:
        raise NotBoolean("model counting needs a boolean tree")
    space = t.space
    if not space.is_all_categorical():
        offender = next(d.name for d in space.features if not d.is_categorical)
        raise NonCategoricalFeature(
            f"{offender!r} is numerical; counting needs categorical features"
        )
    masks = [space.full_mask(i) for i in range(len(space.features))]
    kind, feat, arg = t.kind, t.feat, t.arg
    left, right = t.left, t.right
    total = 0
    stack = [(_VISIT, t.root, 0)]
    while stack:
        op, a, b = stack.pop()
        if op == _SET_MASK:
            masks[a] = b
            continue
        v = a
        if kind[v] == K_LEAF:
            if arg[v] == 1:
                product = 1
                for m in masks:
                    product *= m.bit_count()
                total += product
            continue
        f = feat[v]
        current = masks[f]
        left_mask = current & arg[v]
        right_mask = current & ~arg[v]
        stack.append((_SET_MASK, f, current))
        if right_mask:
            stack.append((_VISIT, right[v], 0))
            stack.append((_SET_MASK, f, right_mask))
        if left_mask:
            stack.append((_VISIT, left[v], 0))
            stack.append((_SET_MASK, f, left_mask))
    return total


# -- conversions to trees ----------------------------------------------------

def cnf_to_tree(cnf, budget=None):
    """Shannon-expand a CNF formula into an equivalent decision tree.

    Branches over categorical values and over threshold cells of the
    formula's own comparisons; worst case exponential, capped by `budget`
    emitted nodes.
    """
    limit = DEFAULT_CONVERSION_BUDGET if budget is None else budget
    space = cnf.space
    builder = TreeBuilder(space)
    emitted = 0

    def bump():
        nonlocal emitted
        emitted += 1
        if emitted > limit:
            raise BudgetExceeded(f"CNF expansion exceeded {limit} nodes")

    def first_open_feature(formula):
        used = formula.features_used()
        for decl in space.features:
            if decl.name in used:
                return decl
        return None

    def expand(formula):
        if any(not clause for clause in formula.clauses):
            bump()
            return builder.add_leaf(0)
        if not formula.clauses:
            bump()
            return builder.add_leaf(1)
        decl = first_open_feature(formula)
        if decl is None:
            # clauses remain but no feature occurs: impossible for nonempty clauses
            raise ParseError("malformed formula: nonempty clause without features")
        if decl.is_categorical:
            node = expand(formula.condition(decl.name, decl.domain[-1]))
            for value in reversed(decl.domain[:-1]):
                bump()
                sub = expand(formula.condition(decl.name, value))
                node = builder.add_cat(decl.name, (value,), sub, node)
            return node
        thresholds = sorted(formula.thresholds_for(decl.name))
        reps = cell_representatives(decl, thresholds)
        node = expand(formula.condition(decl.name, reps[-1]))
        for threshold, rep in zip(reversed(thresholds), reversed(reps[:-1])):
            bump()
            sub = expand(formula.condition(decl.name, rep))
            node = builder.add_num(decl.name, threshold, sub, node)
        return node

    return builder.build(expand(cnf), k=2)


def as_tree(model, budget=None):
    """View any supported boolean model as a decision tree."""
    if isinstance(model, DecisionTree):
        if model.k != 2:
            raise NotBoolean("expected a boolean model")
        return model
    if isinstance(model, Fbdd):
        return unfold_to_tree(model, budget)
    if isinstance(model, CnfFormula):
        return cnf_to_tree(model, budget)
    raise ParseError(f"unsupported model type {type(model).__name__}")


def _joint_cell_space(space, trees):
    """Replace numerical features by categorical cell indices.

    Cells come from the union of the trees' thresholds per feature;
    numerical features tested by no tree are dropped (no model can depend
    on them). Returns (new_space, per-position threshold lists, remap).
    """
    thresholds = {}
    decls = []
    remap = {}
    for pos, decl in enumerate(space.features):
        if decl.is_categorical:
            remap[pos] = len(decls)
            decls.append(decl)
            continue
        pooled = set()
        for t in trees:
            pooled.update(t.thresholds_for(decl.name))
        if not pooled:
            continue  # untestable -> equivalence cannot depend on it
        thresholds[pos] = sorted(pooled)
        remap[pos] = len(decls)
        decls.append(
            FeatureDecl.categorical(decl.name, tuple(range(len(pooled) + 1)))
        )
    return FeatureSpace(tuple(decls)), thresholds, remap


def _tree_over_cells(t, new_space, thresholds, remap):
    kind = list(t.kind)
    feat = []
    arg = []
    for v in range(t.size):
        if t.kind[v] == K_LEAF:
            feat.append(-1)
            arg.append(t.arg[v])
        elif t.kind[v] == K_CAT:
            feat.append(remap[t.feat[v]])
            arg.append(t.arg[v])
        else:
            cells = thresholds[t.feat[v]]
            # x <= cells[j]  <=>  cell index <= j
            j = cells.index(t.arg[v])
            kind[v] = K_CAT
            feat.append(remap[t.feat[v]])
            arg.append((1 << (j + 1)) - 1)
    return DecisionTree(new_space, t.k, kind, feat, arg, t.left, t.right, t.root)


def equivalent(m1, m2, budget=None):
    """Exact model equivalence: all entities classified identically.

    Decided by counting (m1 and not m2) + (not m1 and m2) over the joint
    threshold cells of both models.
    """
    if m1.space != m2.space:
        raise FeatureSpaceMismatch("equivalence needs one shared feature space")
    a = as_tree(m1, budget)
    b = as_tree(m2, budget)
    if not a.space.is_all_categorical():
        new_space, thresholds, remap = _joint_cell_space(a.space, (a, b))
        a = _tree_over_cells(a, new_space, thresholds, remap)
        b = _tree_over_cells(b, new_space, thresholds, remap)
    return (
        model_count(conjoin(a, b.negate())) == 0
        and model_count(conjoin(a.negate(), b)) == 0
    )


def _agree_everywhere(m1, m2, budget):
    """Equivalence extended to k-class trees: all class indicators agree."""
    if isinstance(m1, DecisionTree) and m1.k > 2:
        return all(
            equivalent(m1.booleanize(label), m2.booleanize(label), budget)
            for label in range(m1.k)
        )
    return equivalent(m1, m2, budget)


def is_useful(model, feature, budget=None):
    """Some entity's prediction depends on this feature's value."""
    decl = model.space.feature(feature)
    if decl.is_categorical:
        candidates = list(decl.domain)
    else:
        candidates = cell_representatives(decl, model.thresholds_for(feature))
    if len(candidates) < 2:
        return False
    baseline = model.condition(feature, candidates[0])
    for value in candidates[1:]:
        if not _agree_everywhere(baseline, model.condition(feature, value), budget):
            return True
    return False


# -- the usefulness score ----------------------------------------------------

@dataclass(frozen=True)
class UsefulnessScore:
    feature: str
    necessary_count: int
    total_entities: int

    @property
    def useful(self):
        return self.necessary_count > 0


def usefulness_score(t, feature):
    """Number of entities for which `feature` is necessary.

    total - sum over classes c of CT(AND_b booleanize(t, c)_{x=b}), the
    conjunction built left-to-right in domain order with pruned conjoin.
    """
    if not isinstance(t, DecisionTree):
        raise ParseError("usefulness scores are defined for decision trees")
    space = t.space
    decl = space.feature(feature)
    if not space.is_all_categorical():
        offender = next(d.name for d in space.features if not d.is_categorical)
        raise NonCategoricalFeature(
            f"scores need an all-categorical space; {offender!r} is numerical"
        )
    total = space.entity_count()
    not_necessary = 0
    for label in range(t.k):
        boolean = t.booleanize(label)
        acc = None
        for value in decl.domain:
            conditioned = boolean.condition(feature, value)
            acc = conditioned if acc is None else conjoin(acc, conditioned)
        not_necessary += model_count(acc)
    return UsefulnessScore(feature, total - not_necessary, total)


def score_all(t):
    """Scores for every feature plus the induced descending ranking.

    Ties break by ascending feature id so the ranking is reproducible.
    """
    scores = [usefulness_score(t, decl.name) for decl in t.space.features]
    ranking = sorted(scores, key=lambda s: (-s.necessary_count, s.feature))
    return scores, [s.feature for s in ranking]
