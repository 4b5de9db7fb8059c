"""Necessary-feature detection.

A feature is necessary for a prediction iff some single value flip changes
it. The generic test evaluates the model once per alternative value, with
numerical domains reduced to one representative per threshold-induced
cell. For decision trees there is a single-pass algorithm: walk the
entity's path, keep per feature the set of values consistent with reaching
the current node, and launch a `taut` check over the diverging values at
every node; each tree node is processed O(1) times overall. For read-once
diagrams a bottom-up table of subdiagram outcomes gives all necessary
features in linear time.
"""

from fractions import Fraction

from .errors import FeatureSpaceMismatch, NotBoolean
from .fbdd import F_LEAF, Fbdd, check_read_once
from .tree import K_CAT, K_LEAF, DecisionTree
from .values import INF, NEG_INF, domain_interval


def cell_boundaries(decl, thresholds):
    return [decl.lo] + sorted(thresholds) + [decl.hi]


def cell_representatives(decl, thresholds):
    """One in-domain value per threshold cell [m,t1], (t1,t2], .., (tm,M].

    Finite cells take their midpoint; cells with an infinite end sit one
    unit inside the finite end; a fully unbounded domain is represented
    by zero.
    """
    bounds = cell_boundaries(decl, thresholds)
    reps = []
    for lo, hi in zip(bounds, bounds[1:]):
        if lo == NEG_INF and hi == INF:
            reps.append(0)
        elif lo == NEG_INF:
            reps.append(hi - 1)
        elif hi == INF:
            reps.append(lo + 1)
        else:
            mid = Fraction(lo + hi, 2)
            reps.append(int(mid) if mid.denominator == 1 else mid)
    return reps


def cell_index(thresholds, value):
    """Index of the threshold cell holding `value` (thresholds sorted)."""
    lo, hi = 0, len(thresholds)
    while lo < hi:
        mid = (lo + hi) // 2
        if thresholds[mid] < value:
            lo = mid + 1
        else:
            hi = mid
    return lo


def is_necessary(model, entity, feature):
    """Flip characterization: some alternative value changes the prediction."""
    decl = model.space.feature(feature)
    base = model.evaluate(entity)
    current = entity.value(feature)
    if decl.is_categorical:
        candidates = decl.domain
    else:
        candidates = cell_representatives(decl, model.thresholds_for(feature))
    for value in candidates:
        if value == current:
            continue
        if model.evaluate(entity.with_value(feature, value)) != base:
            return True
    return False


# -- taut primitives ---------------------------------------------------------

def _taut_num(t, start, raw, pos, lo, hi, target):
    """True iff every entity raw_{x=c}, c in (lo, hi], reaches label `target`
    from node `start`. Returns (result, nodes_visited)."""
    kind, feat, arg = t.kind, t.feat, t.arg
    left, right = t.left, t.right
    visits = 0
    stack = [(start, lo, hi)]
    while stack:
        v, lo, hi = stack.pop()
        if lo >= hi:
            continue
        while kind[v] != K_LEAF:
            visits += 1
            f = feat[v]
            if f != pos:
                if kind[v] == K_CAT:
                    v = left[v] if (arg[v] >> raw[f]) & 1 else right[v]
                else:
                    v = left[v] if raw[f] <= arg[v] else right[v]
                continue
            point = (arg[v], 0)
            right_lo = lo if lo >= point else point
            if right_lo < hi:
                stack.append((right[v], right_lo, hi))
            if point < hi:
                hi = point
            if lo >= hi:
                v = -1
                break
            v = left[v]
        if v == -1:
            continue
        visits += 1
        if arg[v] != target:
            return False, visits
    return True, visits


def _taut_cat(t, start, raw, pos, zmask, target):
    kind, feat, arg = t.kind, t.feat, t.arg
    left, right = t.left, t.right
    visits = 0
    stack = [(start, zmask)]
    while stack:
        v, z = stack.pop()
        if z == 0:
            continue
        while kind[v] != K_LEAF:
            visits += 1
            f = feat[v]
            if f != pos:
                if kind[v] == K_CAT:
                    v = left[v] if (arg[v] >> raw[f]) & 1 else right[v]
                else:
                    v = left[v] if raw[f] <= arg[v] else right[v]
                continue
            z_right = z & ~arg[v]
            if z_right:
                stack.append((right[v], z_right))
            z &= arg[v]
            if z == 0:
                v = -1
                break
            v = left[v]
        if v == -1:
            continue
        visits += 1
        if arg[v] != target:
            return False, visits
    return True, visits


def taut_numeric(t, node, entity, feature, lo, hi):
    """Does every value c in (lo, hi] keep T_node(e_{x=c}) accepting?

    `t` must be boolean; lo/hi may be -inf/inf. The empty interval is
    vacuously true.
    """
    if t.k != 2:
        raise NotBoolean("taut is defined over booleanized trees")
    pos = t.space.position(feature)
    lo_ep = (NEG_INF, 0) if lo == NEG_INF else (lo, 0)
    hi_ep = (INF, 0) if hi == INF else (hi, 0)
    ok, _ = _taut_num(t, node, entity.raw, pos, lo_ep, hi_ep, 1)
    return ok


def taut_categorical(t, node, entity, feature, values):
    """Does every value b in `values` keep T_node(e_{x=b}) accepting?"""
    if t.k != 2:
        raise NotBoolean("taut is defined over booleanized trees")
    pos = t.space.position(feature)
    zmask = t.space.value_mask(pos, values)
    ok, _ = _taut_cat(t, node, entity.raw, pos, zmask, 1)
    return ok


# -- linear all-necessary ----------------------------------------------------

def all_necessary_tree(t, entity, count_visits=False):
    """All features whose value flip can change the tree's prediction.

    Single pass over the entity's path; the booleanization on the predicted
    class happens on the fly by comparing leaf labels against it.
    """
    if entity.space is not t.space and entity.space != t.space:
        raise FeatureSpaceMismatch("entity belongs to a different feature space")
    raw = entity.raw
    target = t.evaluate_raw(raw)
    kind, feat, arg = t.kind, t.feat, t.arg
    left, right = t.left, t.right
    space = t.space
    cur_cat = {}
    cur_num = {}
    necessary = set()
    visits = 0
    v = t.root
    while kind[v] != K_LEAF:
        visits += 1
        f = feat[v]
        if kind[v] == K_CAT:
            goes_left = (arg[v] >> raw[f]) & 1
            if f not in necessary:
                mask = cur_cat.get(f)
                if mask is None:
                    mask = space.full_mask(f)
                if goes_left:
                    diverge, follow, off = mask & ~arg[v], mask & arg[v], right[v]
                else:
                    diverge, follow, off = mask & arg[v], mask & ~arg[v], left[v]
                if diverge:
                    ok, sub = _taut_cat(t, off, raw, f, diverge, target)
                    visits += sub
                    if not ok:
                        necessary.add(f)
                cur_cat[f] = follow
            v = left[v] if goes_left else right[v]
        else:
            goes_left = raw[f] <= arg[v]
            if f not in necessary:
                span = cur_num.get(f)
                if span is None:
                    decl = space.features[f]
                    span = domain_interval(decl.lo, decl.hi)
                lo, hi = span
                point = (arg[v], 0)
                low_part = (lo, hi if hi <= point else point)
                high_part = (lo if lo >= point else point, hi)
                if goes_left:
                    diverge, follow, off = high_part, low_part, right[v]
                else:
                    diverge, follow, off = low_part, high_part, left[v]
                if diverge[0] < diverge[1]:
                    ok, sub = _taut_num(t, off, raw, f, diverge[0], diverge[1], target)
                    visits += sub
                    if not ok:
                        necessary.add(f)
                cur_num[f] = follow
            v = left[v] if goes_left else right[v]
    names = space.names
    result = frozenset(names[f] for f in necessary)
    if count_visits:
        return result, visits
    return result


def all_necessary_fbdd(d, entity):
    """All necessary features of a read-once diagram, in one bottom-up pass.

    The subdiagram outcome D_v(e) is tabulated for every reachable node;
    a path node's feature is necessary iff its two children disagree on e
    (read-once makes the flipped entity follow the untouched remainder of
    the path).
    """
    if entity.space is not d.space and entity.space != d.space:
        raise FeatureSpaceMismatch("entity belongs to a different feature space")
    check_read_once(d)
    raw = entity.raw
    one_bit = d._one_bit
    outcome = {}
    stack = [(d.root, False)]
    while stack:
        v, expanded = stack.pop()
        if expanded:
            f = d.feat[v]
            child = d.right[v] if raw[f] == one_bit[f] else d.left[v]
            outcome[v] = outcome[child]
            continue
        if v in outcome:
            continue
        if d.kind[v] == F_LEAF:
            outcome[v] = d.arg[v]
            continue
        outcome[v] = None
        stack.append((v, True))
        stack.append((d.left[v], False))
        stack.append((d.right[v], False))
    names = d.space.names
    necessary = set()
    v = d.root
    while d.kind[v] != F_LEAF:
        f = d.feat[v]
        if outcome[d.left[v]] != outcome[d.right[v]]:
            necessary.add(names[f])
        v = d.right[v] if raw[f] == one_bit[f] else d.left[v]
    return frozenset(necessary)


def all_necessary(model, entity):
    """Dispatch: linear algorithms for trees/diagrams, flips otherwise."""
    if isinstance(model, DecisionTree):
        return all_necessary_tree(model, entity)
    if isinstance(model, Fbdd):
        return all_necessary_fbdd(model, entity)
    return frozenset(
        name for name in model.space.names if is_necessary(model, entity, name)
    )
