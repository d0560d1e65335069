"""
Tree training entry points
"""
from dataclasses import dataclass
from typing import Any, Optional, Sequence, Tuple

import numpy as np

from utils.errors import EmptyDataset
from .builder import TreeBuilder
from .tree import DecisionTreePolicy, RegressionTree


@dataclass(frozen=True)
class WeightedSample:
    """Observation, expert label and weight, optionally with the joint context it came from"""
    features: np.ndarray
    label: int
    weight: float = 1.0
    joint_context: Optional[Any] = None

    def __post_init__(self):
        if self.weight < 0:
            raise ValueError(f"sample weight must be non-negative, got {self.weight}")


def fit_tree(X, y, sample_weight=None, *, max_depth: int, min_samples_split: int = 2,
             criterion: str = "gini", n_actions: Optional[int] = None,
             feature_names: Optional[Sequence[str]] = None,
             action_names: Optional[Sequence[str]] = None) -> DecisionTreePolicy:
    """Greedy CART on arrays"""
    if len(y) == 0:
        raise EmptyDataset("cannot train a tree on an empty dataset")
    builder = TreeBuilder(X, y, sample_weight, max_depth=max_depth, min_samples_split=min_samples_split,
                          criterion=criterion, n_classes=n_actions, feature_names=feature_names,
                          action_names=action_names)
    return builder.grow().to_tree()


def train_decision_tree(data: Sequence[WeightedSample], max_depth: int, min_samples_split: int = 2,
                        criterion: str = "gini", n_actions: Optional[int] = None,
                        feature_names: Optional[Sequence[str]] = None,
                        action_names: Optional[Sequence[str]] = None) -> DecisionTreePolicy:
    """
    Train a classification tree on weighted samples

    Args:
        data: Weighted samples
        max_depth: Depth budget
        min_samples_split: Minimum routed samples for a split
        criterion: 'gini' or 'entropy'
        n_actions: Action count, default max label + 1
        feature_names: Observation labels
        action_names: Action labels

    Returns:
        Trained DecisionTreePolicy
    """
    if not data:
        raise EmptyDataset("cannot train a tree on an empty dataset")
    X = np.vstack([np.asarray(s.features, dtype=float) for s in data])
    y = np.array([s.label for s in data], dtype=int)
    w = np.array([s.weight for s in data], dtype=float)
    return fit_tree(X, y, w, max_depth=max_depth, min_samples_split=min_samples_split,
                    criterion=criterion, n_actions=n_actions, feature_names=feature_names,
                    action_names=action_names)


def fit_regression_tree(X, y, sample_weight=None, *, max_depth: int, min_samples_split: int = 2,
                        feature_names: Optional[Sequence[str]] = None) -> RegressionTree:
    if len(y) == 0:
        raise EmptyDataset("cannot train a tree on an empty dataset")
    builder = TreeBuilder(X, y, sample_weight, max_depth=max_depth, min_samples_split=min_samples_split,
                          criterion="mse", feature_names=feature_names)
    return builder.grow().to_tree()


def train_regression_tree(data: Sequence[Tuple[Sequence[float], float]], max_depth: int,
                          min_samples_split: int = 2) -> RegressionTree:
    """Variance-reduction tree on (features, target) pairs"""
    if not data:
        raise EmptyDataset("cannot train a tree on an empty dataset")
    X = np.vstack([np.asarray(f, dtype=float) for f, _ in data])
    y = np.array([t for _, t in data], dtype=float)
    return fit_regression_tree(X, y, max_depth=max_depth, min_samples_split=min_samples_split)
