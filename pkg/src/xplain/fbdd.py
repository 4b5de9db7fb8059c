"""Free binary decision diagrams: rooted DAG classifiers over binary features.

Traversal goes left on value 0 and right on value 1. The read-once
property (no feature twice on any root-to-leaf path) is checked by
validate(), not at construction, so defective diagrams can be built and
reported on.
"""

from .errors import (
    FeatureSpaceMismatch,
    ParseError,
    ReadOnceViolation,
    ValidationError,
)

F_LEAF, F_NODE = 0, 1


def _check_binary_space(space):
    for decl in space.features:
        if not decl.is_categorical or set(decl.domain) != {0, 1}:
            raise ParseError(
                f"FBDD features must be categorical with domain {{0, 1}}; "
                f"{decl.name!r} is not"
            )


class Fbdd:
    __slots__ = ("space", "kind", "feat", "arg", "left", "right", "root", "_one_bit")

    def __init__(self, space, kind, feat, arg, left, right, root):
        _check_binary_space(space)
        n = len(kind)
        if not (len(feat) == len(arg) == len(left) == len(right) == n):
            raise ParseError("inconsistent arena arrays")
        if n == 0 or not (0 <= root < n):
            raise ParseError("root reference out of range")
        for v in range(n):
            if kind[v] == F_NODE and not (0 <= left[v] < n and 0 <= right[v] < n):
                raise ParseError(f"child reference out of range at node {v}")
            if kind[v] == F_LEAF and arg[v] not in (0, 1):
                raise ParseError(f"FBDD leaf label must be 0 or 1, got {arg[v]!r}")
        self.space = space
        self.kind = tuple(kind)
        self.feat = tuple(feat)
        self.arg = tuple(arg)
        self.left = tuple(left)
        self.right = tuple(right)
        self.root = root
        self._one_bit = tuple(
            space.value_bit(i, 1) for i in range(len(space.features))
        )

    @property
    def kind_name(self):
        return "fbdd"

    @property
    def size(self):
        return len(self.kind)

    def is_boolean(self):
        return True

    @property
    def k(self):
        return 2

    def evaluate(self, entity):
        if entity.space is not self.space and entity.space != self.space:
            raise FeatureSpaceMismatch("entity belongs to a different feature space")
        return self.evaluate_raw(entity.raw)

    def evaluate_raw(self, raw):
        v = self.root
        steps = 0
        limit = len(self.kind)
        while self.kind[v] != F_LEAF:
            steps += 1
            if steps > limit:
                raise ValidationError("cycle in diagram")
            f = self.feat[v]
            v = self.right[v] if raw[f] == self._one_bit[f] else self.left[v]
        return self.arg[v]

    def features_used(self):
        names = self.space.names
        return {names[self.feat[v]] for v in range(self.size) if self.kind[v] == F_NODE}

    def negate(self):
        arg = tuple(
            1 - a if kd == F_LEAF else a for kd, a in zip(self.kind, self.arg)
        )
        return Fbdd(self.space, self.kind, self.feat, arg, self.left, self.right, self.root)

    def condition(self, feature, value):
        pos = self.space.position(feature)
        bit = self.space.value_bit(pos, value)
        goes_right = bit == self._one_bit[pos]
        new_id = {}
        order = []  # post-order over reachable nodes
        stack = [(self.root, False)]
        while stack:
            v, expanded = stack.pop()
            if expanded:
                order.append(v)
                continue
            if v in new_id:
                continue
            new_id[v] = None
            stack.append((v, True))
            if self.kind[v] == F_NODE:
                stack.append((self.left[v], False))
                stack.append((self.right[v], False))
        kind, feat, arg, left, right = [], [], [], [], []
        for v in order:
            if self.kind[v] == F_LEAF:
                new_id[v] = len(kind)
                kind.append(F_LEAF)
                feat.append(-1)
                arg.append(self.arg[v])
                left.append(-1)
                right.append(-1)
                continue
            lid = new_id[self.left[v]]
            rid = new_id[self.right[v]]
            if lid is None or rid is None:
                raise ValidationError("cycle in diagram")
            if self.feat[v] == pos:
                new_id[v] = rid if goes_right else lid
            else:
                new_id[v] = len(kind)
                kind.append(F_NODE)
                feat.append(self.feat[v])
                arg.append(-1)
                left.append(lid)
                right.append(rid)
        return Fbdd(self.space, kind, feat, arg, left, right, new_id[self.root])

    def __repr__(self):
        return f"Fbdd({self.size} nodes)"


def check_read_once(d):
    """Raise ReadOnceViolation if a feature repeats along some path.

    Works on the reachable DAG: node v violates read-once iff feat(v)
    appears somewhere strictly below v. Feature sets are carried as
    bitmasks over feature positions.
    """
    below = {}
    stack = [(d.root, False)]
    on_path = set()
    while stack:
        v, expanded = stack.pop()
        if expanded:
            on_path.discard(v)
            if d.kind[v] == F_LEAF:
                below[v] = 0
            else:
                sub = below[d.left[v]] | below[d.right[v]]
                if (sub >> d.feat[v]) & 1:
                    name = d.space.names[d.feat[v]]
                    raise ReadOnceViolation(
                        f"feature {name!r} repeats on a path through node {v}"
                    )
                below[v] = sub | (1 << d.feat[v])
            continue
        if v in below:
            continue
        if v in on_path:
            raise ValidationError("cycle in diagram")
        on_path.add(v)
        stack.append((v, True))
        if d.kind[v] == F_NODE:
            stack.append((d.left[v], False))
            stack.append((d.right[v], False))


def unfold_to_tree(d, budget=None):
    """Expand a diagram into an equivalent decision tree.

    Worst case exponential in depth; `budget` caps emitted nodes.
    """
    from .errors import BudgetExceeded
    from .tree import TreeBuilder

    check_read_once(d)
    builder = TreeBuilder(d.space)
    limit = budget if budget is not None else 1_000_000
    count = 0

    def walk(v, depth):
        nonlocal count
        count += 1
        if count > limit:
            raise BudgetExceeded(f"unfolding exceeded {limit} nodes")
        if depth > len(d.space) + 1:
            raise ValidationError("diagram deeper than its feature count")
        if d.kind[v] == F_LEAF:
            return builder.add_leaf(d.arg[v])
        name = d.space.names[d.feat[v]]
        # tree test x in {1} holds -> left, which must match FBDD value 1 -> right
        lid = walk(d.right[v], depth + 1)
        rid = walk(d.left[v], depth + 1)
        return builder.add_cat(name, (1,), lid, rid)

    return builder.build(walk(d.root, 0), k=2)


def disjoint_disjunction_fbdds(m1, m2, fresh):
    from .errors import FeatureNotFresh

    if m1.space != m2.space:
        raise FeatureSpaceMismatch("models must share one feature space")
    space = m1.space
    if fresh not in space:
        raise FeatureNotFresh(f"selector {fresh!r} is not in the feature space")
    if fresh in m1.features_used() or fresh in m2.features_used():
        raise FeatureNotFresh(f"selector {fresh!r} is already used by an operand")
    pos = space.position(fresh)
    off = m1.size
    kind = list(m1.kind) + list(m2.kind)
    feat = list(m1.feat) + list(m2.feat)
    arg = list(m1.arg) + list(m2.arg)
    left = list(m1.left) + [v + off if v >= 0 else -1 for v in m2.left]
    right = list(m1.right) + [v + off if v >= 0 else -1 for v in m2.right]
    kind.append(F_NODE)
    feat.append(pos)
    arg.append(-1)
    left.append(m2.root + off)  # value 0 -> m2
    right.append(m1.root)       # value 1 -> m1
    return Fbdd(space, kind, feat, arg, left, right, len(kind) - 1)
