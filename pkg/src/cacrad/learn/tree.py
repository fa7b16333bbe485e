"""Binary decision trees grown depth-first on numpy arrays.

One implementation serves two roles: Gini classification (forest base
learner) and least-squares regression with Newton leaf values (boosting
base learner). Nodes live in flat parallel lists so trees serialize to
JSON directly. Splits use midpoint thresholds between consecutive
distinct values; ties prefer the lowest feature index then the lowest
threshold, which keeps growth deterministic for a fixed candidate set.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

_LEAF = -1


@dataclass
class Tree:
    feature: list = field(default_factory=list)    # _LEAF marks a leaf
    threshold: list = field(default_factory=list)  # x[f] <= thr goes left
    left: list = field(default_factory=list)
    right: list = field(default_factory=list)
    value: list = field(default_factory=list)      # leaf payload (score/step)

    def _add_node(self) -> int:
        self.feature.append(_LEAF)
        self.threshold.append(0.0)
        self.left.append(_LEAF)
        self.right.append(_LEAF)
        self.value.append(0.0)
        return len(self.feature) - 1

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        out = np.empty(len(x), dtype=np.float64)
        for r in range(len(x)):
            node = 0
            while self.feature[node] != _LEAF:
                if x[r, self.feature[node]] <= self.threshold[node]:
                    node = self.left[node]
                else:
                    node = self.right[node]
            out[r] = self.value[node]
        return out

    def to_dict(self) -> dict:
        return {
            "feature": list(self.feature),
            "threshold": [repr(float(t)) for t in self.threshold],
            "left": list(self.left),
            "right": list(self.right),
            "value": [repr(float(v)) for v in self.value],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Tree":
        return cls(
            feature=[int(v) for v in d["feature"]],
            threshold=[float(v) for v in d["threshold"]],
            left=[int(v) for v in d["left"]],
            right=[int(v) for v in d["right"]],
            value=[float(v) for v in d["value"]],
        )


def _first_min_split(cost: np.ndarray, xs: np.ndarray, n: int):
    """First strict minimum over (column, sorted position) of a cost block.

    cost is (n-1, F) with np.inf at unusable positions. Transposing before
    the flat argmin makes the scan column-major, so ties resolve to the
    lowest column and then the lowest threshold.
    """
    by_col = cost.T
    flat = int(np.argmin(by_col))
    f, i = divmod(flat, n - 1)
    if not np.isfinite(by_col[f, i]):
        return None
    thr = (xs[i, f] + xs[i + 1, f]) / 2.0
    return int(f), float(thr)


def _gini_best_split(xb: np.ndarray, y: np.ndarray):
    """Best (column, midpoint threshold) in a feature block by weighted Gini.

    All columns are scored in one pass: sort each, take cumulative
    positive counts, and price a split after every position. Returns None
    when no column has two distinct values.
    """
    n = len(y)
    order = np.argsort(xb, axis=0, kind="stable")
    xs = np.take_along_axis(xb, order, axis=0)
    valid = xs[1:] != xs[:-1]
    if not valid.any():
        return None
    pos = np.cumsum(y[order], axis=0)
    left_n = np.arange(1, n, dtype=np.float64)[:, None]
    right_n = n - left_n
    left_pos = pos[:-1]
    right_pos = float(y.sum()) - left_pos
    # Gini impurity of each side, weighted by side size (common n factor dropped)
    pl = left_pos / left_n
    pr = right_pos / right_n
    cost = left_n * (2 * pl * (1 - pl)) + right_n * (2 * pr * (1 - pr))
    return _first_min_split(np.where(valid, cost, np.inf), xs, n)


def _sse_best_split(xb: np.ndarray, target: np.ndarray):
    """Best (column, midpoint threshold) minimizing summed squared error
    of side means, scored for all columns of the block at once."""
    n = len(target)
    order = np.argsort(xb, axis=0, kind="stable")
    xs = np.take_along_axis(xb, order, axis=0)
    valid = xs[1:] != xs[:-1]
    if not valid.any():
        return None
    ts = target[order]
    csum = np.cumsum(ts, axis=0)
    csq = np.cumsum(ts ** 2, axis=0)
    k = np.arange(1, n, dtype=np.float64)[:, None]
    left_sum = csum[:-1]
    left_sq = csq[:-1]
    right_sum = csum[-1] - left_sum
    right_sq = csq[-1] - left_sq
    cost = (left_sq - left_sum ** 2 / k) + (right_sq - right_sum ** 2 / (n - k))
    return _first_min_split(np.where(valid, cost, np.inf), xs, n)


def grow_classification_tree(x: np.ndarray, y: np.ndarray,
                             max_depth: Optional[int],
                             max_features: Optional[int],
                             rng: np.random.Generator) -> Tree:
    """Gini tree over 0/1 labels; leaf value = positive-class fraction."""
    tree = Tree()
    root = tree._add_node()
    stack = [(root, np.arange(len(y)), 0)]
    n_feat = x.shape[1]
    while stack:
        node, rows, depth = stack.pop()
        ys = y[rows]
        frac = float(ys.mean())
        if (max_depth is not None and depth >= max_depth) or len(rows) < 2 \
                or frac == 0.0 or frac == 1.0:
            tree.value[node] = frac
            continue
        if max_features is not None and max_features < n_feat:
            cand = np.sort(rng.permutation(n_feat)[:max_features])
        else:
            cand = np.arange(n_feat)
        got = _gini_best_split(x[np.ix_(rows, cand)], ys)
        if got is None:
            tree.value[node] = frac
            continue
        f_local, thr = got
        f = int(cand[f_local])
        go_left = x[rows, f] <= thr
        li = tree._add_node()
        ri = tree._add_node()
        tree.feature[node] = f
        tree.threshold[node] = thr
        tree.left[node] = li
        tree.right[node] = ri
        stack.append((ri, rows[~go_left], depth + 1))
        stack.append((li, rows[go_left], depth + 1))
    return tree


def grow_regression_tree(x: np.ndarray, residual: np.ndarray, hessian: np.ndarray,
                         max_depth: Optional[int]) -> Tree:
    """Least-squares tree on residuals; leaf value is the Newton step
    sum(residual)/sum(hessian) with a zero guard for saturated leaves."""
    tree = Tree()
    root = tree._add_node()
    stack = [(root, np.arange(len(residual)), 0)]

    def leaf_value(rows):
        h = float(hessian[rows].sum())
        return float(residual[rows].sum()) / h if h > 1e-12 else 0.0

    while stack:
        node, rows, depth = stack.pop()
        rs = residual[rows]
        if (max_depth is not None and depth >= max_depth) or len(rows) < 2 \
                or float(rs.min()) == float(rs.max()):
            tree.value[node] = leaf_value(rows)
            continue
        got = _sse_best_split(x[rows], rs)
        if got is None:
            tree.value[node] = leaf_value(rows)
            continue
        f, thr = got
        go_left = x[rows, f] <= thr
        li = tree._add_node()
        ri = tree._add_node()
        tree.feature[node] = f
        tree.threshold[node] = thr
        tree.left[node] = li
        tree.right[node] = ri
        stack.append((ri, rows[~go_left], depth + 1))
        stack.append((li, rows[go_left], depth + 1))
    return tree
