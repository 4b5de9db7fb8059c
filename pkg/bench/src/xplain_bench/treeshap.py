"""Path-dependent SHAP values for sklearn decision trees.

Implements the polynomial-time tree SHAP recursion (the path-dependent
variant): feature subsets absent from the conditioning follow both
branches weighted by training cover, and the path bookkeeping keeps one
entry per unique feature with its zero/one fractions and permutation
weights. The kernel is written iteratively over flat arrays so numba can
compile it; set BENCH_NO_NUMBA=1 to force the pure-Python twin (the
benchmark CLI reports both timings with `xplain-bench shap-bench`).

`exact_shapley` is the oracle: brute-force subset enumeration over the
same cover-weighted conditional expectation. Tests hold the kernel to it.
"""

import os
from math import factorial

import numpy as np

__all__ = ["TreeArrays", "shap_values", "exact_shapley", "KERNEL_IS_COMPILED"]


class TreeArrays:
    """Flat view of a fitted sklearn DecisionTreeClassifier."""

    def __init__(self, children_left, children_right, feature, threshold,
                 values, weights, max_depth):
        self.children_left = np.asarray(children_left, dtype=np.int64)
        self.children_right = np.asarray(children_right, dtype=np.int64)
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.values = np.asarray(values, dtype=np.float64)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.max_depth = int(max_depth)

    @staticmethod
    def from_sklearn(clf):
        tree = clf.tree_
        raw = tree.value.reshape(tree.node_count, -1)
        totals = raw.sum(axis=1, keepdims=True)
        totals[totals == 0] = 1.0
        probabilities = raw / totals
        return TreeArrays(
            tree.children_left,
            tree.children_right,
            tree.feature,
            tree.threshold,
            probabilities,
            tree.weighted_n_node_samples,
            tree.max_depth,
        )


def _kernel(children_left, children_right, feature, threshold, values,
            weights, max_depth, x_rows, phi):
    """Accumulate SHAP values for every row of x_rows into phi.

    phi has shape (n_rows, n_features, n_outputs). The explicit stack
    replays the recursion: each frame owns a copy of its unique path
    (feature, zero fraction, one fraction, permutation weight).
    """
    n_rows = x_rows.shape[0]
    n_outputs = values.shape[1]
    width = max_depth + 3
    depth_frames = 2 * max_depth + 8
    f_node = np.zeros(depth_frames, dtype=np.int64)
    f_len = np.zeros(depth_frames, dtype=np.int64)
    f_pz = np.zeros(depth_frames, dtype=np.float64)
    f_po = np.zeros(depth_frames, dtype=np.float64)
    f_pi = np.zeros(depth_frames, dtype=np.int64)
    p_d = np.zeros((depth_frames, width), dtype=np.int64)
    p_z = np.zeros((depth_frames, width), dtype=np.float64)
    p_o = np.zeros((depth_frames, width), dtype=np.float64)
    p_w = np.zeros((depth_frames, width), dtype=np.float64)

    for row in range(n_rows):
        x = x_rows[row]
        top = 0
        f_node[0] = 0
        f_len[0] = 0
        f_pz[0] = 1.0
        f_po[0] = 1.0
        f_pi[0] = -1
        while top >= 0:
            node = f_node[top]
            length = f_len[top]
            pz = f_pz[top]
            po = f_po[top]
            pi = f_pi[top]
            d = p_d[top]
            z = p_z[top]
            o = p_o[top]
            w = p_w[top]
            top -= 1

            # EXTEND the path by (pi, pz, po)
            d[length] = pi
            z[length] = pz
            o[length] = po
            w[length] = 1.0 if length == 0 else 0.0
            for i in range(length - 1, -1, -1):
                w[i + 1] += po * w[i] * (i + 1.0) / (length + 1.0)
                w[i] = pz * w[i] * (length - i) / (length + 1.0)
            last = length  # index of the last path entry

            if children_left[node] < 0:
                # leaf: each path entry contributes its unwound weight
                for i in range(1, last + 1):
                    one = o[i]
                    zero = z[i]
                    total = 0.0
                    if one != 0.0:
                        carry = w[last]
                        for j in range(last - 1, -1, -1):
                            part = carry / ((j + 1.0) * one)
                            total += part
                            carry = w[j] - part * zero * (last - j)
                    else:
                        for j in range(last - 1, -1, -1):
                            total += w[j] / (zero * (last - j))
                    total *= last + 1.0
                    scale = total * (one - zero)
                    for out in range(n_outputs):
                        phi[row, d[i], out] += scale * values[node, out]
                continue

            split = feature[node]
            if x[split] <= threshold[node]:
                hot = children_left[node]
                cold = children_right[node]
            else:
                hot = children_right[node]
                cold = children_left[node]
            parent_weight = weights[node]
            hot_fraction = weights[hot] / parent_weight
            cold_fraction = weights[cold] / parent_weight

            incoming_zero = 1.0
            incoming_one = 1.0
            found = -1
            for i in range(1, last + 1):
                if d[i] == split:
                    found = i
                    break
            new_len = last + 1
            if found >= 0:
                incoming_zero = z[found]
                incoming_one = o[found]
                # UNWIND entry `found` out of the path
                one = incoming_one
                zero = incoming_zero
                carry = w[last]
                for j in range(last - 1, -1, -1):
                    if one != 0.0:
                        keep = w[j]
                        w[j] = carry * (last + 1.0) / ((j + 1.0) * one)
                        carry = keep - w[j] * zero * (last - j) / (last + 1.0)
                    else:
                        w[j] = w[j] * (last + 1.0) / (zero * (last - j))
                for j in range(found, last):
                    d[j] = d[j + 1]
                    z[j] = z[j + 1]
                    o[j] = o[j + 1]
                new_len = last

            # push cold then hot (hot is processed first)
            top += 1
            f_node[top] = cold
            f_len[top] = new_len
            f_pz[top] = cold_fraction * incoming_zero
            f_po[top] = 0.0
            f_pi[top] = split
            for j in range(new_len):
                p_d[top, j] = d[j]
                p_z[top, j] = z[j]
                p_o[top, j] = o[j]
                p_w[top, j] = w[j]
            top += 1
            f_node[top] = hot
            f_len[top] = new_len
            f_pz[top] = hot_fraction * incoming_zero
            f_po[top] = incoming_one
            f_pi[top] = split
            for j in range(new_len):
                p_d[top, j] = d[j]
                p_z[top, j] = z[j]
                p_o[top, j] = o[j]
                p_w[top, j] = w[j]


KERNEL_IS_COMPILED = False
if os.environ.get("BENCH_NO_NUMBA", "") not in ("1", "true", "yes"):
    try:
        from numba import njit

        _kernel = njit(cache=True)(_kernel)
        KERNEL_IS_COMPILED = True
    except ImportError:  # pragma: no cover - numba is an optional speedup
        pass


def shap_values(arrays, x_rows):
    """SHAP values, shape (n_rows, n_features_in_x, n_outputs)."""
    x_rows = np.ascontiguousarray(x_rows, dtype=np.float64)
    n_features = x_rows.shape[1]
    phi = np.zeros((x_rows.shape[0], n_features, arrays.values.shape[1]))
    _kernel(arrays.children_left, arrays.children_right, arrays.feature,
            arrays.threshold, arrays.values, arrays.weights,
            arrays.max_depth, x_rows, phi)
    return phi


def mean_abs_shap(arrays, x_rows):
    """Global importance: mean |SHAP| over rows, summed over outputs."""
    phi = shap_values(arrays, x_rows)
    return np.abs(phi).mean(axis=0).sum(axis=1)


# -- the oracle ---------------------------------------------------------------

def _cover_expectation(arrays, x, fixed, node=0):
    """Cover-weighted conditional expectation with `fixed` features pinned."""
    if arrays.children_left[node] < 0:
        return arrays.values[node]
    split = arrays.feature[node]
    left = arrays.children_left[node]
    right = arrays.children_right[node]
    if split in fixed:
        child = left if x[split] <= arrays.threshold[node] else right
        return _cover_expectation(arrays, x, fixed, child)
    wl = arrays.weights[left]
    wr = arrays.weights[right]
    total = wl + wr
    return (
        wl / total * _cover_expectation(arrays, x, fixed, left)
        + wr / total * _cover_expectation(arrays, x, fixed, right)
    )


def exact_shapley(arrays, x, n_features):
    """Brute-force Shapley values of the cover-weighted value function."""
    from itertools import combinations

    n_outputs = arrays.values.shape[1]
    phi = np.zeros((n_features, n_outputs))
    others = list(range(n_features))
    for target in range(n_features):
        rest = [f for f in others if f != target]
        for size in range(len(rest) + 1):
            coeff = (factorial(size) * factorial(n_features - size - 1)
                     / factorial(n_features))
            for subset in combinations(rest, size):
                with_target = _cover_expectation(arrays, x, set(subset) | {target})
                without = _cover_expectation(arrays, x, set(subset))
                phi[target] += coeff * (with_target - without)
    return phi
