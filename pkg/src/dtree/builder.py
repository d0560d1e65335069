"""
Breadth-first tree growth engine
"""
from typing import Callable, Dict, List, Mapping, Optional, Sequence

import numpy as np

from utils.errors import EmptyDataset
from utils.log import get_logger
from .criteria import (
    CRITERIA,
    Split,
    best_class_split,
    best_regression_split,
    class_counts,
    node_impurity,
    weighted_variance,
)
from .tree import DecisionTreePolicy, Node, RegressionTree

logger = get_logger(__name__)

# Receives {open node: routed row indices}, returns {open node: keep mask}
KeepFunction = Callable[[Dict[int, np.ndarray]], Mapping[int, np.ndarray]]


class TreeBuilder:
    """
    Grows one tree a level at a time.

    Every call to ``grow_level`` splits the current frontier (the open leaves
    at the deepest level) using the data routed to each node. An optional
    keep function filters each node's data before its split is chosen; it is
    evaluated for the whole frontier before any node is split. Children
    receive the filtered data. Plain CART is the special case without a keep
    function, run until no node is open.

    Open leaves can be asked for a projected prediction: a full-depth tree
    trained on the node's data with the remaining depth budget, memoised until
    the node is split.
    """

    def __init__(self, X, y, sample_weight=None, *, max_depth: int, min_samples_split: int = 2,
                 criterion: str = "gini", n_classes: Optional[int] = None,
                 feature_names: Optional[Sequence[str]] = None,
                 action_names: Optional[Sequence[str]] = None):
        """
        Args:
            X: (n, d) feature matrix
            y: (n,) labels (integers) or targets (reals, criterion 'mse')
            sample_weight: (n,) non-negative weights, default all ones
            max_depth: Depth budget, 0 gives a single leaf
            min_samples_split: Nodes whose routed sample weight is below this stay leaves
            criterion: 'gini', 'entropy' or 'mse'
            n_classes: Label count, default max label + 1
            feature_names: Labels carried into the finished tree
            action_names: Action labels carried into the finished tree
        """
        if criterion not in CRITERIA:
            raise ValueError(f"unknown criterion '{criterion}', expected one of {CRITERIA}")
        if max_depth < 0:
            raise ValueError(f"max_depth must be >= 0, got {max_depth}")
        self.X = np.asarray(X, dtype=float)
        if self.X.ndim != 2:
            raise ValueError("X must be a 2-D matrix")
        self.regression = criterion == "mse"
        self.y = np.asarray(y, dtype=float if self.regression else int)
        self.w = np.ones(len(self.y)) if sample_weight is None else np.asarray(sample_weight, dtype=float)
        if len(self.y) != self.X.shape[0] or len(self.w) != self.X.shape[0]:
            raise ValueError("X, y and sample_weight must have the same length")
        if (self.w < 0).any():
            raise ValueError("sample weights must be non-negative")
        rows = np.flatnonzero(self.w > 0)
        if not rows.size:
            raise EmptyDataset("no sample with positive weight")

        self.max_depth = int(max_depth)
        self.min_samples_split = int(min_samples_split)
        self.criterion = criterion
        if not self.regression:
            if (self.y < 0).any():
                raise ValueError("labels must be non-negative integers")
            self.n_classes = int(n_classes) if n_classes is not None else int(self.y.max()) + 1
            if self.y.max() >= self.n_classes:
                raise ValueError(f"label {self.y.max()} >= n_classes {self.n_classes}")
        else:
            self.n_classes = 0
        self.feature_names = feature_names
        self.action_names = action_names

        self._nodes: List[Node] = []
        self._depths: List[int] = []
        self._data: Dict[int, np.ndarray] = {}
        self._open: List[int] = []
        self._projected: Dict[int, DecisionTreePolicy] = {}
        self.level = 0
        self._add_leaf(rows, depth=0)

    # ------------------------------------------------------------ node stats

    def _leaf(self, rows: np.ndarray) -> Node:
        if self.regression:
            w = self.w[rows]
            return Node(value=float(np.dot(w, self.y[rows]) / w.sum()))
        counts = class_counts(self.y[rows], self.w[rows], self.n_classes)
        return Node(action=int(np.argmax(counts)), counts=tuple(float(c) for c in counts))

    def _weighted_impurity(self, rows: np.ndarray) -> float:
        """Total weight times impurity"""
        if self.regression:
            w = self.w[rows]
            return float(w.sum() * weighted_variance(self.y[rows], w))
        counts = class_counts(self.y[rows], self.w[rows], self.n_classes)
        return float(counts.sum() * node_impurity(counts, self.criterion))

    def _add_leaf(self, rows: np.ndarray, depth: int) -> int:
        node_id = len(self._nodes)
        self._nodes.append(self._leaf(rows))
        self._depths.append(depth)
        if depth < self.max_depth:
            self._data[node_id] = rows
            self._open.append(node_id)
        return node_id

    def _find_split(self, rows: np.ndarray) -> Optional[Split]:
        if self.w[rows].sum() < self.min_samples_split:
            return None
        y = self.y[rows]
        if np.all(y == y[0]):
            return None
        if self.regression:
            return best_regression_split(self.X[rows], y, self.w[rows])
        return best_class_split(self.X[rows], y, self.w[rows], self.n_classes, self.criterion)

    # ---------------------------------------------------------------- growth

    @property
    def frontier(self) -> List[int]:
        return sorted(self._open)

    def can_grow(self) -> bool:
        return bool(self._open)

    def node_rows(self, node: int) -> np.ndarray:
        return self._data[node]

    def node_depth(self, node: int) -> int:
        return self._depths[node]

    def grow_level(self, keep: Optional[KeepFunction] = None) -> int:
        """
        Split every open node of the current level

        Args:
            keep: Optional filter over each node's routed rows

        Returns:
            Number of nodes split
        """
        frontier = self.frontier
        self._open = []
        masks = keep({node: self._data[node] for node in frontier}) if keep is not None else {}

        n_split = 0
        for node in frontier:
            rows = self._data.pop(node)
            self._projected.pop(node, None)
            if keep is not None:
                kept = rows[np.asarray(masks[node], dtype=bool)]
                if not kept.size:
                    logger.warning("node %d: filter removed all %d routed samples, keeping majority leaf",
                                   node, rows.size)
                    continue
                rows = kept
                self._nodes[node] = self._leaf(rows)

            split = self._find_split(rows)
            if split is None:
                continue
            go_left = self.X[rows, split.feature] < split.threshold
            left_rows, right_rows = rows[go_left], rows[~go_left]
            gain = self._weighted_impurity(rows) - self._weighted_impurity(left_rows) \
                - self._weighted_impurity(right_rows)
            depth = self._depths[node] + 1
            left = self._add_leaf(left_rows, depth)
            right = self._add_leaf(right_rows, depth)
            self._nodes[node] = Node(feature=split.feature, threshold=split.threshold,
                                     left=left, right=right, gain=max(gain, 0.0))
            n_split += 1
        self.level += 1
        return n_split

    def grow(self) -> "TreeBuilder":
        while self.can_grow():
            self.grow_level()
        return self

    # ------------------------------------------------------------ projection

    def apply(self, X) -> np.ndarray:
        """Current leaf of the partial tree reached by each row"""
        return self._snapshot().apply(X)

    def _fit_projected(self, node: int) -> DecisionTreePolicy:
        rows = self._data[node]
        sub = TreeBuilder(self.X[rows], self.y[rows], self.w[rows],
                          max_depth=self.max_depth - self._depths[node],
                          min_samples_split=self.min_samples_split, criterion=self.criterion,
                          n_classes=self.n_classes, feature_names=self.feature_names,
                          action_names=self.action_names)
        return sub.grow().to_tree()

    def projected_tree(self, node: int) -> DecisionTreePolicy:
        if node not in self._projected:
            self._projected[node] = self._fit_projected(node)
        return self._projected[node]

    def projected_predict_batch(self, X, memo: bool = True) -> np.ndarray:
        """
        Predict with the projected final tree of each row's current leaf

        Closed leaves answer with their own action.

        Args:
            X: (n, d) observations of this builder's agent
            memo: Reuse projected trees across calls

        Returns:
            (n,) predicted actions
        """
        X = np.asarray(X, dtype=float)
        leaves = self.apply(X)
        predictions = np.empty(len(leaves), dtype=int)
        for leaf in np.unique(leaves):
            selected = leaves == leaf
            if int(leaf) in self._data:
                tree = self.projected_tree(int(leaf)) if memo else self._fit_projected(int(leaf))
                predictions[selected] = tree.predict_batch(X[selected])
            else:
                predictions[selected] = self._nodes[int(leaf)].action
        return predictions

    def projected_predict(self, x, memo: bool = True) -> int:
        return int(self.projected_predict_batch(np.asarray(x, dtype=float).reshape(1, -1), memo=memo)[0])

    # ---------------------------------------------------------------- output

    def _snapshot(self):
        n_features = self.X.shape[1]
        if self.regression:
            return RegressionTree(self._nodes, n_features, self.max_depth, self.feature_names)
        return DecisionTreePolicy(self._nodes, n_features, self.n_classes, self.max_depth,
                                  self.feature_names, self.action_names, self.criterion)

    def to_tree(self):
        """Finished (or partial) tree as an immutable object"""
        return self._snapshot()
