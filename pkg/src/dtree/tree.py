"""
Axis-parallel decision trees: classification policies and regression trees
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from utils.errors import DimensionMismatch


@dataclass(frozen=True)
class Node:
    """Internal node when ``feature >= 0``, leaf otherwise"""
    feature: int = -1
    threshold: float = 0.0
    left: int = -1
    right: int = -1
    action: int = -1
    counts: Tuple[float, ...] = ()
    value: float = 0.0
    gain: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


class _TreeBase:
    """Shared traversal over a node array rooted at index 0"""

    def __init__(self, nodes: Sequence[Node], n_features: int, max_depth: int,
                 feature_names: Optional[Sequence[str]] = None, criterion: str = "gini"):
        self.nodes: Tuple[Node, ...] = tuple(nodes)
        if not self.nodes:
            raise ValueError("a tree needs at least one node")
        self.n_features = int(n_features)
        self.max_depth = int(max_depth)
        self.criterion = criterion
        self.feature_names: Tuple[str, ...] = tuple(feature_names) if feature_names is not None \
            else tuple(f"x{k}" for k in range(self.n_features))
        self._feature = np.array([n.feature for n in self.nodes], dtype=int)
        self._threshold = np.array([n.threshold for n in self.nodes], dtype=float)
        self._left = np.array([n.left for n in self.nodes], dtype=int)
        self._right = np.array([n.right for n in self.nodes], dtype=int)

    def _features(self, obs) -> np.ndarray:
        x = np.asarray(getattr(obs, "features", obs), dtype=float)
        if x.ndim != 1 or x.shape[0] != self.n_features:
            raise DimensionMismatch(self.n_features, int(x.shape[-1]) if x.ndim else 0)
        return x

    def _matrix(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(self.n_features, X.shape[1])
        return X

    def leaf_index(self, obs) -> int:
        x = self._features(obs)
        node = 0
        while self._feature[node] >= 0:
            node = self._left[node] if x[self._feature[node]] < self._threshold[node] else self._right[node]
        return int(node)

    def apply(self, X) -> np.ndarray:
        """Leaf index reached by each row"""
        X = self._matrix(X)
        current = np.zeros(X.shape[0], dtype=int)
        rows = np.arange(X.shape[0])
        while True:
            feature = self._feature[current]
            internal = feature >= 0
            if not internal.any():
                return current
            values = X[rows, np.where(internal, feature, 0)]
            go_left = values < self._threshold[current]
            step = np.where(go_left, self._left[current], self._right[current])
            current = np.where(internal, step, current)

    def leaf_depths(self) -> List[int]:
        depths, stack = [], [(0, 0)]
        while stack:
            node, depth = stack.pop()
            if self.nodes[node].is_leaf:
                depths.append(depth)
            else:
                stack.append((self.nodes[node].left, depth + 1))
                stack.append((self.nodes[node].right, depth + 1))
        return sorted(depths)

    @property
    def depth(self) -> int:
        return max(self.leaf_depths())

    @property
    def n_leaves(self) -> int:
        return sum(1 for n in self.nodes if n.is_leaf)

    def structure(self) -> tuple:
        return (type(self).__name__, self.nodes, self.n_features, self.max_depth, self.criterion)

    def __eq__(self, other) -> bool:
        return isinstance(other, _TreeBase) and self.structure() == other.structure()

    def __hash__(self):
        return hash(self.structure())


class DecisionTreePolicy(_TreeBase):
    """Maps one agent's observation vector to a discrete action"""

    def __init__(self, nodes: Sequence[Node], n_features: int, n_actions: int, max_depth: int,
                 feature_names: Optional[Sequence[str]] = None,
                 action_names: Optional[Sequence[str]] = None, criterion: str = "gini"):
        super().__init__(nodes, n_features, max_depth, feature_names, criterion)
        self.n_actions = int(n_actions)
        self.action_names: Tuple[str, ...] = tuple(action_names) if action_names is not None \
            else tuple(str(a) for a in range(self.n_actions))
        self._action = np.array([n.action for n in self.nodes], dtype=int)

    def predict(self, obs) -> int:
        """
        Action for one observation

        Args:
            obs: Observation or 1-D feature vector

        Returns:
            Leaf action
        """
        return int(self._action[self.leaf_index(obs)])

    def predict_batch(self, X) -> np.ndarray:
        return self._action[self.apply(X)]

    def structure(self) -> tuple:
        return super().structure() + (self.n_actions,)

    def __repr__(self) -> str:
        return f"DecisionTreePolicy(depth={self.depth}, leaves={self.n_leaves}, features={self.n_features})"


class RegressionTree(_TreeBase):
    """Maps a feature vector to a real value"""

    def __init__(self, nodes: Sequence[Node], n_features: int, max_depth: int,
                 feature_names: Optional[Sequence[str]] = None):
        super().__init__(nodes, n_features, max_depth, feature_names, criterion="mse")
        self._value = np.array([n.value for n in self.nodes], dtype=float)

    def predict(self, x) -> float:
        return float(self._value[self.leaf_index(x)])

    def predict_batch(self, X) -> np.ndarray:
        return self._value[self.apply(X)]

    @classmethod
    def constant(cls, value: float, n_features: int, max_depth: int = 0) -> "RegressionTree":
        return cls([Node(value=float(value))], n_features, max_depth)

    def __repr__(self) -> str:
        return f"RegressionTree(depth={self.depth}, leaves={self.n_leaves})"


def feature_importance(tree: _TreeBase) -> np.ndarray:
    """
    Normalized weighted impurity decrease per feature

    Args:
        tree: Trained tree

    Returns:
        Vector summing to 1; uniform when the tree never splits
    """
    importance = np.zeros(tree.n_features)
    for node in tree.nodes:
        if not node.is_leaf:
            importance[node.feature] += node.gain
    total = importance.sum()
    if total <= 0:
        return np.full(tree.n_features, 1.0 / tree.n_features)
    return importance / total
