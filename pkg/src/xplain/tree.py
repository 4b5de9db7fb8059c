"""Decision trees over mixed categorical/numerical feature spaces.

Nodes live in an arena of parallel tuples. An internal node tests either
`x in V` (categorical, V stored as a bitmask over the domain order) or
`x <= t` (numerical, t exact); the left child is taken when the test holds.
Leaves carry a class label below the tree's class count.

Trees are immutable after construction; every operation allocates a fresh
tree. Structural copies prune branches whose path constraints became
infeasible and collapse subtrees that turned constant, which keeps
iterated conjunctions from exploding.
"""

import sys

from .errors import (
    BadClass,
    FeatureNotFresh,
    FeatureSpaceMismatch,
    NotBoolean,
    ParseError,
    ValidationError,
)
from .values import at, domain_interval, exact

K_LEAF, K_CAT, K_NUM = 0, 1, 2


class DecisionTree:
    __slots__ = ("space", "k", "kind", "feat", "arg", "left", "right", "root")

    def __init__(self, space, k, kind, feat, arg, left, right, root):
        if k < 2:
            raise ParseError(f"class count must be >= 2, got {k}")
        n = len(kind)
        if not (len(feat) == len(arg) == len(left) == len(right) == n):
            raise ParseError("inconsistent arena arrays")
        if n == 0 or not (0 <= root < n):
            raise ParseError("root reference out of range")
        for v in range(n):
            if kind[v] != K_LEAF and not (0 <= left[v] < n and 0 <= right[v] < n):
                raise ParseError(f"child reference out of range at node {v}")
        self.space = space
        self.k = k
        self.kind = tuple(kind)
        self.feat = tuple(feat)
        self.arg = tuple(arg)
        self.left = tuple(left)
        self.right = tuple(right)
        self.root = root

    @property
    def kind_name(self):
        return "tree"

    @property
    def size(self):
        return len(self.kind)

    def is_boolean(self):
        return self.k == 2

    # -- construction ------------------------------------------------------

    @staticmethod
    def leaf(space, label, k=2):
        return DecisionTree(space, k, (K_LEAF,), (-1,), (label,), (-1,), (-1,), 0)

    @staticmethod
    def from_nested(space, k, spec):
        """Build from nested dicts shaped like the JSON interchange nodes.

        {"leaf": c} | {"feature": f, "leq": t, "left": .., "right": ..}
                    | {"feature": f, "in": [..], "left": .., "right": ..}
        """
        b = TreeBuilder(space)

        def walk(node):
            if "leaf" in node:
                label = node["leaf"]
                if not isinstance(label, int) or not 0 <= label < k:
                    raise ParseError(f"leaf label {label!r} outside 0..{k - 1}")
                return b.add_leaf(label)
            feature = node["feature"]
            lid = walk(node["left"])
            rid = walk(node["right"])
            if "leq" in node:
                return b.add_num(feature, node["leq"], lid, rid)
            if "in" in node:
                return b.add_cat(feature, node["in"], lid, rid)
            raise ParseError(f"internal node needs a 'leq' or 'in' test: {node!r}")

        return b.build(walk(spec), k=k)

    # -- queries -------------------------------------------------------------

    def evaluate(self, entity):
        if entity.space is not self.space and entity.space != self.space:
            raise FeatureSpaceMismatch("entity belongs to a different feature space")
        return self.evaluate_raw(entity.raw)

    def evaluate_raw(self, raw):
        kind, feat, arg = self.kind, self.feat, self.arg
        left, right = self.left, self.right
        v = self.root
        steps = 0
        limit = len(kind)
        while kind[v] != K_LEAF:
            steps += 1
            if steps > limit:
                raise ValidationError("cycle in tree arena")
            f = feat[v]
            if kind[v] == K_CAT:
                v = left[v] if (arg[v] >> raw[f]) & 1 else right[v]
            else:
                v = left[v] if raw[f] <= arg[v] else right[v]
        return arg[v]

    def features_used(self):
        names = self.space.names
        return {names[self.feat[v]] for v in range(self.size) if self.kind[v] != K_LEAF}

    def thresholds_for(self, feature):
        pos = self.space.position(feature)
        return {
            self.arg[v]
            for v in range(self.size)
            if self.kind[v] == K_NUM and self.feat[v] == pos
        }

    def leaf_labels(self):
        return [self.arg[v] for v in range(self.size) if self.kind[v] == K_LEAF]

    def depth(self):
        out = 0
        stack = [(self.root, 1)]
        while stack:
            v, d = stack.pop()
            if self.kind[v] == K_LEAF:
                out = max(out, d)
            else:
                stack.append((self.left[v], d + 1))
                stack.append((self.right[v], d + 1))
        return out

    # -- closure operations -------------------------------------------------

    def negate(self):
        if self.k != 2:
            raise NotBoolean(f"negate needs a boolean tree, got {self.k} classes")
        arg = tuple(
            1 - a if kd == K_LEAF else a for kd, a in zip(self.kind, self.arg)
        )
        return DecisionTree(self.space, 2, self.kind, self.feat, arg,
                            self.left, self.right, self.root)

    def booleanize(self, target):
        """Indicator tree of `tree(e) == target`."""
        if not isinstance(target, int) or not 0 <= target < self.k:
            raise BadClass(f"class {target!r} outside 0..{self.k - 1}")
        arg = tuple(
            (1 if a == target else 0) if kd == K_LEAF else a
            for kd, a in zip(self.kind, self.arg)
        )
        return DecisionTree(self.space, 2, self.kind, self.feat, arg,
                            self.left, self.right, self.root)

    def condition(self, feature, value):
        """The tree for M_{x=b}: every x-test is resolved on the constant b."""
        space = self.space
        pos = space.position(feature)
        decl = space.features[pos]
        if decl.is_categorical:
            bit = space.value_bit(pos, value)
            num_value = None
        else:
            num_value = exact(value)
            from .errors import OutOfDomainValue

            if not (decl.lo <= num_value <= decl.hi):
                raise OutOfDomainValue(f"{feature!r} = {value!r} outside its domain")
        b = TreeBuilder(space)
        new_id = {}
        seen = set()
        stack = [(self.root, False)]
        while stack:
            v, expanded = stack.pop()
            if not expanded:
                if v in seen:
                    raise ValidationError("node graph is not a tree")
                seen.add(v)
            if self.kind[v] == K_LEAF:
                new_id[v] = b.add_leaf(self.arg[v])
                continue
            if self.feat[v] == pos:
                if self.kind[v] == K_CAT:
                    chosen = self.left[v] if (self.arg[v] >> bit) & 1 else self.right[v]
                else:
                    chosen = self.left[v] if num_value <= self.arg[v] else self.right[v]
                if expanded:
                    new_id[v] = new_id[chosen]
                else:
                    stack.append((v, True))
                    stack.append((chosen, False))
                continue
            if expanded:
                new_id[v] = b.add_raw(self.kind[v], self.feat[v], self.arg[v],
                                      new_id[self.left[v]], new_id[self.right[v]])
            else:
                stack.append((v, True))
                stack.append((self.left[v], False))
                stack.append((self.right[v], False))
        return b.build(new_id[self.root], k=self.k)

    def __repr__(self):
        return f"DecisionTree({self.size} nodes, {self.k} classes)"


class TreeBuilder:
    """Mutable arena used while assembling a tree; build() compacts it."""

    __slots__ = ("space", "kind", "feat", "arg", "left", "right")

    def __init__(self, space):
        self.space = space
        self.kind = []
        self.feat = []
        self.arg = []
        self.left = []
        self.right = []

    def _push(self, kind, feat, arg, left, right):
        self.kind.append(kind)
        self.feat.append(feat)
        self.arg.append(arg)
        self.left.append(left)
        self.right.append(right)
        return len(self.kind) - 1

    def add_leaf(self, label):
        return self._push(K_LEAF, -1, label, -1, -1)

    def add_cat(self, feature, values, left, right):
        pos = self.space.position(feature)
        decl = self.space.features[pos]
        if not decl.is_categorical:
            raise ParseError(f"set test on numerical feature {feature!r}")
        mask = self.space.value_mask(pos, values)
        if mask == 0 or mask == self.space.full_mask(pos):
            raise ParseError(f"categorical test on {feature!r} must be a proper nonempty subset")
        return self._push(K_CAT, pos, mask, left, right)

    def add_num(self, feature, threshold, left, right):
        pos = self.space.position(feature)
        decl = self.space.features[pos]
        if decl.is_categorical:
            raise ParseError(f"threshold test on categorical feature {feature!r}")
        threshold = exact(threshold)
        if not (decl.lo <= threshold < decl.hi):
            raise ParseError(f"threshold {threshold} on {feature!r} outside [lo, hi)")
        return self._push(K_NUM, pos, threshold, left, right)

    def add_raw(self, kind, feat, arg, left, right):
        return self._push(kind, feat, arg, left, right)

    def replace_with_subtree(self, vid, kind, feat, arg, left, right):
        # in-place rewrite used by iterative grafting constructions
        self.kind[vid] = kind
        self.feat[vid] = feat
        self.arg[vid] = arg
        self.left[vid] = left
        self.right[vid] = right

    def build(self, root, k=2):
        """Compact reachable nodes into an immutable DecisionTree."""
        order = []
        remap = {}
        stack = [root]
        while stack:
            v = stack.pop()
            if v in remap:
                raise ParseError("node shared or revisited while building a tree")
            remap[v] = len(order)
            order.append(v)
            if self.kind[v] != K_LEAF:
                stack.append(self.right[v])
                stack.append(self.left[v])
        kind = [self.kind[v] for v in order]
        feat = [self.feat[v] for v in order]
        arg = [self.arg[v] for v in order]
        left = [remap[self.left[v]] if self.kind[v] != K_LEAF else -1 for v in order]
        right = [remap[self.right[v]] if self.kind[v] != K_LEAF else -1 for v in order]
        return DecisionTree(self.space, k, kind, feat, arg, left, right, remap[root])


class _Residuals:
    """Per-feature residual domains along a path: bitmasks and intervals."""

    __slots__ = ("cat", "lo", "hi")

    def __init__(self, space):
        self.cat = [
            space.full_mask(i) if d.is_categorical else None
            for i, d in enumerate(space.features)
        ]
        self.lo = [None] * len(space.features)
        self.hi = [None] * len(space.features)
        for i, d in enumerate(space.features):
            if not d.is_categorical:
                self.lo[i], self.hi[i] = domain_interval(d.lo, d.hi)


def _copy_pruned(tree, v, builder, res, graft_accepting):
    """Copy `tree` below the current residual constraints.

    Infeasible branches vanish, constant subtrees collapse to leaves, and
    every 1-leaf is replaced by graft_accepting(). Returns a builder node id.
    """
    kind = tree.kind
    if kind[v] == K_LEAF:
        if tree.arg[v] == 1:
            return graft_accepting()
        return builder.add_leaf(tree.arg[v])
    f = tree.feat[v]
    if kind[v] == K_CAT:
        mask = res.cat[f]
        left_mask = mask & tree.arg[v]
        right_mask = mask & ~tree.arg[v]
        if left_mask == 0:
            return _copy_pruned(tree, tree.right[v], builder, res, graft_accepting)
        if right_mask == 0:
            return _copy_pruned(tree, tree.left[v], builder, res, graft_accepting)
        res.cat[f] = left_mask
        lid = _copy_pruned(tree, tree.left[v], builder, res, graft_accepting)
        res.cat[f] = right_mask
        rid = _copy_pruned(tree, tree.right[v], builder, res, graft_accepting)
        res.cat[f] = mask
    else:
        lo, hi = res.lo[f], res.hi[f]
        point = at(tree.arg[v])
        left_hi = hi if hi <= point else point
        right_lo = lo if lo >= point else point
        if lo >= left_hi:
            return _copy_pruned(tree, tree.right[v], builder, res, graft_accepting)
        if right_lo >= hi:
            return _copy_pruned(tree, tree.left[v], builder, res, graft_accepting)
        res.hi[f] = left_hi
        lid = _copy_pruned(tree, tree.left[v], builder, res, graft_accepting)
        res.hi[f] = hi
        res.lo[f] = right_lo
        rid = _copy_pruned(tree, tree.right[v], builder, res, graft_accepting)
        res.lo[f] = lo
    if (
        builder.kind[lid] == K_LEAF
        and builder.kind[rid] == K_LEAF
        and builder.arg[lid] == builder.arg[rid]
    ):
        return lid
    return builder.add_raw(tree.kind[v], f, tree.arg[v], lid, rid)


def conjoin(t1, t2):
    """Pointwise conjunction of two boolean trees over the same space.

    Built by grafting a (path-pruned) copy of t2 onto every accepting leaf
    of t1, so the result never exceeds |t1| + #1-leaves(t1) * |t2| nodes.
    """
    if t1.k != 2 or t2.k != 2:
        raise NotBoolean("conjoin needs boolean trees")
    if t1.space != t2.space:
        raise FeatureSpaceMismatch("conjoin needs a shared feature space")
    builder = TreeBuilder(t1.space)
    res = _Residuals(t1.space)

    def graft_t2():
        return _copy_pruned(t2, t2.root, builder, res, lambda: builder.add_leaf(1))

    needed = 8 * (t1.depth() + t2.depth()) + 200
    old_limit = sys.getrecursionlimit()
    if needed > old_limit:
        sys.setrecursionlimit(needed)
    try:
        root = _copy_pruned(t1, t1.root, builder, res, graft_t2)
    finally:
        if needed > old_limit:
            sys.setrecursionlimit(old_limit)
    return builder.build(root, k=2)


def simplify(tree):
    """Prune infeasible branches and collapse constant subtrees."""
    if tree.k != 2:
        raise NotBoolean("simplify is defined for boolean trees")
    builder = TreeBuilder(tree.space)
    res = _Residuals(tree.space)
    root = _copy_pruned(tree, tree.root, builder, res, lambda: builder.add_leaf(1))
    return builder.build(root, k=2)


def _binary_01(decl):
    return decl.is_categorical and len(decl.domain) == 2 and set(decl.domain) == {0, 1}


def disjoint_disjunction_trees(m1, m2, fresh):
    """(m1 and fresh=1) or (m2 and fresh=0) under a fresh binary selector."""
    if m1.k != 2 or m2.k != 2:
        raise NotBoolean("disjoint disjunction needs boolean models")
    if m1.space != m2.space:
        raise FeatureSpaceMismatch("models must share one feature space")
    space = m1.space
    decl = space.feature(fresh)
    if not _binary_01(decl):
        raise FeatureNotFresh(f"selector {fresh!r} must be categorical with domain {{0, 1}}")
    if fresh in m1.features_used() or fresh in m2.features_used():
        raise FeatureNotFresh(f"selector {fresh!r} is already used by an operand")
    pos = space.position(fresh)
    mask_one = 1 << space.value_bit(pos, 1)
    off = m1.size
    kind = list(m1.kind) + list(m2.kind)
    feat = list(m1.feat) + list(m2.feat)
    arg = list(m1.arg) + list(m2.arg)
    left = list(m1.left) + [v + off if v >= 0 else -1 for v in m2.left]
    right = list(m1.right) + [v + off if v >= 0 else -1 for v in m2.right]
    kind.append(K_CAT)
    feat.append(pos)
    arg.append(mask_one)
    left.append(m1.root)
    right.append(m2.root + off)
    return DecisionTree(space, 2, kind, feat, arg, left, right, len(kind) - 1)
