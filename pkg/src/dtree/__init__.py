"""
From-scratch CART trees used by every extraction algorithm
"""
from .tree import Node, DecisionTreePolicy, RegressionTree, feature_importance
from .criteria import Split, best_class_split, best_regression_split, node_impurity
from .builder import TreeBuilder
from .training import (
    WeightedSample,
    fit_tree,
    fit_regression_tree,
    train_decision_tree,
    train_regression_tree
)
from .serialization import (
    TREE_FORMAT,
    tree_to_document,
    document_to_tree,
    serialize_tree,
    deserialize_tree,
    parse_json,
    tree_to_dot,
    dot_topology,
    DotTopology
)

__all__ = [
    'Node',
    'DecisionTreePolicy',
    'RegressionTree',
    'feature_importance',
    'Split',
    'best_class_split',
    'best_regression_split',
    'node_impurity',
    'TreeBuilder',
    'WeightedSample',
    'fit_tree',
    'fit_regression_tree',
    'train_decision_tree',
    'train_regression_tree',
    'TREE_FORMAT',
    'tree_to_document',
    'document_to_tree',
    'serialize_tree',
    'deserialize_tree',
    'parse_json',
    'tree_to_dot',
    'dot_topology',
    'DotTopology'
]
