"""Gradient-boosted and random-forest tree models over sparse TF-IDF rows.

Both models are built on the kernels module: boosted regression trees grow
leaf-wise on logistic-loss gradients (one-vs-all per class); forest trees
grow depth-first on bootstrap replicates, scoring a fixed number of random
(feature, threshold) candidates per node. All randomness is pre-drawn from
per-tree generator streams spawned from (seed, tree index), so training is
deterministic and independent of the kernel backend's execution schedule.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NonFinite
from .kernels import build_sorted_csc, get_kernels

# Newton leaf steps are clipped so a single tree cannot push a margin to
# floating overflow before the loss check sees it.
MAX_LEAF_VALUE = 20.0


def sigmoid(z):
    with np.errstate(over="ignore"):  # overflow saturates to exactly 0 or 1
        return 1.0 / (1.0 + np.exp(-np.asarray(z, dtype=np.float64)))


class Tree:
    """Flat-array binary tree. feature == -1 marks a leaf."""

    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self):
        self.feature = []
        self.threshold = []
        self.left = []
        self.right = []
        self.value = []

    def add_leaf(self, value):
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(value)
        return len(self.feature) - 1

    def make_split(self, node, feature, threshold, left, right):
        self.feature[node] = feature
        self.threshold[node] = threshold
        self.left[node] = left
        self.right[node] = right
        self.value[node] = 0.0

    def predict_row(self, row):
        """Evaluate one dense feature row."""
        node = 0
        while self.feature[node] >= 0:
            if row[self.feature[node]] <= self.threshold[node]:
                node = self.left[node]
            else:
                node = self.right[node]
        return self.value[node]

    def to_dict(self):
        return {
            "feature": list(self.feature),
            "threshold": [float(t) for t in self.threshold],
            "left": list(self.left),
            "right": list(self.right),
            "value": [float(v) for v in self.value],
        }

    @classmethod
    def from_dict(cls, d):
        tree = cls()
        tree.feature = [int(x) for x in d["feature"]]
        tree.threshold = [float(x) for x in d["threshold"]]
        tree.left = [int(x) for x in d["left"]]
        tree.right = [int(x) for x in d["right"]]
        tree.value = [float(x) for x in d["value"]]
        return tree


def _leaf_value(sum_g, sum_h):
    if sum_h < 1e-12:
        return 0.0
    return float(np.clip(sum_g / sum_h, -MAX_LEAF_VALUE, MAX_LEAF_VALUE))


def fit_regression_tree(csc, n_rows, g, h, max_leaves, min_leaf, kernels):
    """One leaf-wise boosted tree on gradients g with hessians h.

    Returns (tree, per-row prediction on the training rows).
    """
    indptr, rows, vals, col_of = csc
    node_of = np.zeros(n_rows, dtype=np.int64)
    tree = Tree()

    sum_g = float(np.sum(g))
    sum_h = float(np.sum(h))
    root = tree.add_leaf(_leaf_value(sum_g, sum_h))
    # partition id -> (tree node, count, sum_g, sum_h, best split)
    leaves = {}

    def evaluate(pid, tree_node, count, sg, sh):
        if count >= 2 * min_leaf and sh > 0.0:
            gain, feat, thr = kernels.gbt_best_split(
                indptr, rows, vals, col_of, node_of, pid, g, h,
                sg, sh, count, min_leaf)
        else:
            gain, feat, thr = 0.0, -1, 0.0
        leaves[pid] = (tree_node, count, sg, sh, gain, feat, thr)

    evaluate(0, root, n_rows, sum_g, sum_h)
    next_pid = 1

    while len(leaves) < max_leaves:
        best_pid = -1
        best_gain = 0.0
        for pid in sorted(leaves):
            gain = leaves[pid][4]
            if gain > best_gain:
                best_gain = gain
                best_pid = pid
        if best_pid < 0:
            break
        tree_node, count, sg, sh, _, feat, thr = leaves.pop(best_pid)
        right_pid = next_pid
        next_pid += 1
        rn, rg, rh = kernels.gbt_partition(
            indptr, rows, vals, node_of, best_pid, feat, thr, right_pid, g, h)
        ln, lg, lh = count - rn, sg - rg, sh - rh
        left_node = tree.add_leaf(_leaf_value(lg, lh))
        right_node = tree.add_leaf(_leaf_value(rg, rh))
        tree.make_split(tree_node, feat, thr, left_node, right_node)
        evaluate(best_pid, left_node, ln, lg, lh)
        evaluate(right_pid, right_node, rn, rg, rh)

    leaf_value = np.zeros(next_pid, dtype=np.float64)
    for pid, (tree_node, *_rest) in leaves.items():
        leaf_value[pid] = tree.value[tree_node]
    return tree, leaf_value[node_of]


class BoostedClassifier:
    """One-vs-all gradient boosting with logistic loss."""

    def __init__(self, n_trees=100, max_leaves=20, min_samples_per_leaf=10,
                 learning_rate=0.2, backend=None):
        self.n_trees = int(n_trees)
        self.max_leaves = int(max_leaves)
        self.min_leaf = int(min_samples_per_leaf)
        self.learning_rate = float(learning_rate)
        self.backend = backend
        self.f0 = None          # per class
        self.trees = None       # per class list of Tree

    def fit(self, X_csr, y_idx, n_classes):
        kernels = get_kernels(self.backend)
        csc = build_sorted_csc(X_csr)
        n = X_csr.shape[0]
        self.f0 = []
        self.trees = []
        for c in range(n_classes):
            y = (y_idx == c).astype(np.float64)
            pbar = float(y.mean())
            pbar = min(max(pbar, 1e-12), 1.0 - 1e-12)
            f0 = math.log(pbar / (1.0 - pbar))
            margins = np.full(n, f0, dtype=np.float64)
            class_trees = []
            for _ in range(self.n_trees):
                p = sigmoid(margins)
                g = y - p
                h = p * (1.0 - p)
                tree, train_pred = fit_regression_tree(
                    csc, n, g, h, self.max_leaves, self.min_leaf, kernels)
                margins = margins + self.learning_rate * train_pred
                p = sigmoid(margins)
                pos = p[y == 1.0]
                neg = p[y == 0.0]
                with np.errstate(divide="ignore"):
                    loss = -(np.log(pos).sum() + np.log(1.0 - neg).sum())
                if not np.isfinite(loss):
                    raise NonFinite(
                        "boosting loss diverged; lower the learning rate")
                class_trees.append(tree)
            self.f0.append(f0)
            self.trees.append(class_trees)
        return self

    def decision_row(self, row):
        """Per-class boosted margins for one dense feature row."""
        out = []
        for c, class_trees in enumerate(self.trees):
            z = self.f0[c]
            for tree in class_trees:
                z += self.learning_rate * tree.predict_row(row)
            out.append(z)
        return np.asarray(out)

    def score_row(self, row):
        """Per-class sigmoid scores (the one-vs-all combination rule)."""
        return sigmoid(self.decision_row(row))

    def training_loss_curve(self, X_csr, y_idx, cls):
        """Logistic training loss after each boosting round for one class."""
        y = (y_idx == cls).astype(np.float64)
        rows = np.asarray(X_csr.todense())
        margins = np.full(X_csr.shape[0], self.f0[cls], dtype=np.float64)
        losses = []
        for tree in self.trees[cls]:
            preds = np.array([tree.predict_row(r) for r in rows])
            margins = margins + self.learning_rate * preds
            loss = float(np.sum(np.logaddexp(0.0, margins) - y * margins))
            losses.append(loss)
        return losses

    def to_dict(self):
        return {
            "f0": [float(v) for v in self.f0],
            "trees": [[t.to_dict() for t in class_trees]
                      for class_trees in self.trees],
        }

    @classmethod
    def from_dict(cls, d, hyper):
        model = cls(n_trees=hyper["n_trees"], max_leaves=hyper["max_leaves"],
                    min_samples_per_leaf=hyper["min_samples_per_leaf"],
                    learning_rate=hyper["learning_rate"])
        model.f0 = [float(v) for v in d["f0"]]
        model.trees = [[Tree.from_dict(t) for t in class_trees]
                       for class_trees in d["trees"]]
        return model


class ForestClassifier:
    """Bagged trees with random split candidates; score = vote fraction."""

    def __init__(self, n_estimators=8, max_depth=32, random_splits_per_node=128,
                 min_samples_per_leaf=1, seed=0, backend=None):
        self.n_estimators = int(n_estimators)
        self.max_depth = int(max_depth)
        self.n_candidates = int(random_splits_per_node)
        self.min_leaf = int(min_samples_per_leaf)
        self.seed = int(seed)
        self.backend = backend
        self.trees = None

    def _fit_one(self, csc, n, y_idx, n_classes, n_features, rng, kernels):
        indptr, rows, vals, _ = csc
        bag = rng.integers(0, n, size=n)
        weights = np.bincount(bag, minlength=n).astype(np.int64)
        node_of = np.where(weights > 0, 0, -1).astype(np.int64)

        max_nodes = 2 * n + 1
        cand_feats = rng.integers(0, n_features, size=(max_nodes, self.n_candidates))
        cand_feats = cand_feats.astype(np.int64)
        cand_fracs = rng.random((max_nodes, self.n_candidates))

        root_counts = np.zeros(n_classes, dtype=np.int64)
        np.add.at(root_counts, y_idx, weights)
        total = int(weights.sum())

        tree = Tree()
        root = tree.add_leaf(0)
        # stack of (partition id, tree node, depth, class counts, candidate row)
        stack = [(0, root, 0, root_counts, 0)]
        next_pid = 1
        next_row = 1  # candidate row per created node, in creation order

        while stack:
            pid, tree_node, depth, counts, cand_row = stack.pop()
            count = int(counts.sum())
            majority = int(np.argmax(counts))  # first max = lowest class index
            pure = counts[majority] == count
            if depth >= self.max_depth or pure or count < 2 * self.min_leaf:
                tree.value[tree_node] = majority
                continue
            gain, feat, thr = kernels.rf_best_candidate(
                indptr, rows, vals, node_of, pid, y_idx, weights, n_classes,
                cand_feats[cand_row], cand_fracs[cand_row], counts, count,
                self.min_leaf)
            if feat < 0:
                tree.value[tree_node] = majority
                continue
            right_pid = next_pid
            next_pid += 1
            right_counts = np.asarray(kernels.rf_partition(
                indptr, rows, vals, node_of, pid, feat, thr, right_pid,
                y_idx, weights, n_classes), dtype=np.int64)
            left_counts = counts - right_counts
            left_node = tree.add_leaf(0)
            right_node = tree.add_leaf(0)
            tree.make_split(tree_node, feat, thr, left_node, right_node)
            left_row, right_row = next_row, next_row + 1
            next_row += 2
            stack.append((right_pid, right_node, depth + 1, right_counts,
                          right_row))
            stack.append((pid, left_node, depth + 1, left_counts, left_row))
        return tree

    def fit(self, X_csr, y_idx, n_classes):
        kernels = get_kernels(self.backend)
        csc = build_sorted_csc(X_csr)
        n, n_features = X_csr.shape
        self.trees = []
        for t in range(self.n_estimators):
            rng = np.random.default_rng(
                np.random.SeedSequence(self.seed, spawn_key=(t,)))
            self.trees.append(self._fit_one(
                csc, n, y_idx, n_classes, n_features, rng, kernels))
        return self

    def score_row(self, row, n_classes):
        """Fraction of trees voting for each class."""
        votes = np.zeros(n_classes, dtype=np.float64)
        for tree in self.trees:
            votes[int(tree.predict_row(row))] += 1.0
        return votes / len(self.trees)

    def to_dict(self):
        return {"trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_dict(cls, d, hyper, seed):
        model = cls(n_estimators=hyper["n_estimators"],
                    max_depth=hyper["max_depth"],
                    random_splits_per_node=hyper["random_splits_per_node"],
                    min_samples_per_leaf=hyper["min_samples_per_leaf"],
                    seed=seed)
        model.trees = [Tree.from_dict(t) for t in d["trees"]]
        return model
