"""
Tests for the CART engine, tree documents and DOT rendering
"""
import copy
import json
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from dtree import (
    DecisionTreePolicy,
    Node,
    TreeBuilder,
    WeightedSample,
    best_class_split,
    deserialize_tree,
    document_to_tree,
    dot_topology,
    feature_importance,
    fit_regression_tree,
    fit_tree,
    node_impurity,
    serialize_tree,
    train_decision_tree,
    tree_to_document,
    tree_to_dot
)
from utils.errors import DimensionMismatch, EmptyDataset, ParseError


def print_header(title):
    """Print section header"""
    print("\n" + "=" * 60)
    print(f"  {title}")
    print("=" * 60)


def random_dataset(seed, n=40, d=3, n_classes=3):
    rng = np.random.default_rng(seed)
    X = rng.integers(0, 5, size=(n, d)).astype(float)
    y = rng.integers(0, n_classes, size=n)
    w = rng.integers(1, 4, size=n).astype(float)
    return X, y, w


def brute_force_impurity(X, y, w, n_classes, criterion="gini"):
    best = None
    for feature in range(X.shape[1]):
        values = np.unique(X[:, feature])
        for lo, hi in zip(values[:-1], values[1:]):
            left = X[:, feature] < (lo + hi) / 2
            impurity = 0.0
            for side in (left, ~left):
                counts = np.bincount(y[side], weights=w[side], minlength=n_classes)
                impurity += counts.sum() * node_impurity(counts, criterion)
            impurity /= w.sum()
            best = impurity if best is None else min(best, impurity)
    return best


def test_split_is_optimal():
    """The chosen split has the lowest weighted child impurity of every candidate"""
    print_header("TEST 1: Split Optimality")

    for seed in range(25):
        X, y, w = random_dataset(seed)
        for criterion in ("gini", "entropy"):
            split = best_class_split(X, y, w, 3, criterion)
            assert split is not None
            assert split.impurity == pytest.approx(brute_force_impurity(X, y, w, 3, criterion), abs=1e-9)
    print("✅ 50 random datasets matched the brute-force optimum")


def test_split_ties_prefer_low_feature_and_threshold():
    """Equal splits go to the lowest feature index, then the lowest threshold"""
    print_header("TEST 2: Split Tie-Breaking")

    X = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    y = np.array([0, 1, 0, 1])
    split = best_class_split(X, y, np.ones(4), 2)
    assert split.feature == 0
    assert split.threshold == 0.5
    print(f"✅ feature {split.feature}, threshold {split.threshold}")


def test_weights_match_duplication():
    """Integer weights grow the same tree as duplicated rows"""
    print_header("TEST 3: Weights vs Duplicates")

    for seed in range(10):
        X, y, w = random_dataset(seed, n=30)
        weighted = fit_tree(X, y, w, max_depth=4, n_actions=3)
        repeats = w.astype(int)
        duplicated = fit_tree(np.repeat(X, repeats, axis=0), np.repeat(y, repeats), max_depth=4, n_actions=3)
        shape = [(n.feature, n.threshold, n.left, n.right, n.action) for n in weighted.nodes]
        assert shape == [(n.feature, n.threshold, n.left, n.right, n.action) for n in duplicated.nodes]
        assert np.array_equal(weighted.predict_batch(X), duplicated.predict_batch(X))
    print("✅ 10 weighted trees equal their duplicated counterparts")


def test_min_samples_split_counts_weight():
    """The split minimum counts sample weight, so weights still match duplicates"""
    print_header("TEST 3b: Split Minimum and Weights")

    duplicated = fit_tree(np.array([[0.0], [1.0], [1.0]]), np.array([0, 1, 1]),
                          max_depth=2, min_samples_split=3, n_actions=2)
    weighted = fit_tree(np.array([[0.0], [1.0]]), np.array([0, 1]), np.array([1.0, 2.0]),
                        max_depth=2, min_samples_split=3, n_actions=2)
    assert duplicated.n_leaves == 2
    assert serialize_tree(weighted) == serialize_tree(duplicated)

    # total weight 2 stays below the minimum
    light = fit_tree(np.array([[0.0], [1.0]]), np.array([0, 1]), np.array([1.0, 1.0]),
                     max_depth=2, min_samples_split=3, n_actions=2)
    assert light.n_leaves == 1

    for seed in range(10):
        X, y, w = random_dataset(seed, n=30)
        repeats = w.astype(int)
        for minimum in (3, 5, 8):
            a = fit_tree(X, y, w, max_depth=4, min_samples_split=minimum, n_actions=3)
            b = fit_tree(np.repeat(X, repeats, axis=0), np.repeat(y, repeats),
                         max_depth=4, min_samples_split=minimum, n_actions=3)
            assert [(n.feature, n.threshold, n.left, n.right, n.action) for n in a.nodes] == \
                [(n.feature, n.threshold, n.left, n.right, n.action) for n in b.nodes]
    print("✅ Weighted and duplicated trees agree for min_samples_split 3, 5 and 8")


def test_tree_limits():
    """Depth budget, pure nodes and zero-weight rows"""
    print_header("TEST 4: Tree Limits")

    X, y, w = random_dataset(1)
    for depth in range(4):
        tree = fit_tree(X, y, w, max_depth=depth, n_actions=3)
        assert tree.depth <= depth
    assert fit_tree(X, np.zeros(len(y), dtype=int), max_depth=3).n_leaves == 1

    # zero-weight rows never influence the tree
    w_masked = w.copy()
    w_masked[::2] = 0.0
    masked = fit_tree(X, y, w_masked, max_depth=3, n_actions=3)
    dropped = fit_tree(X[1::2], y[1::2], w[1::2], max_depth=3, n_actions=3)
    assert masked == dropped

    with pytest.raises(EmptyDataset):
        fit_tree(X, y, np.zeros(len(y)), max_depth=2)
    with pytest.raises(EmptyDataset):
        train_decision_tree([], max_depth=2)
    with pytest.raises(DimensionMismatch):
        masked.predict(np.zeros(5))
    print("✅ Depth bounds, pure leaves and empty data handled")


def test_weighted_samples():
    """Weighted samples train the same tree as arrays"""
    print_header("TEST 5: Weighted Samples")

    X, y, w = random_dataset(2)
    samples = [WeightedSample(x, int(label), float(weight)) for x, label, weight in zip(X, y, w)]
    assert train_decision_tree(samples, max_depth=3, n_actions=3) == fit_tree(X, y, w, max_depth=3, n_actions=3)
    with pytest.raises(ValueError):
        WeightedSample(X[0], 0, -1.0)
    print("✅ WeightedSample path agrees with fit_tree")


def test_regression_tree():
    """Regression leaves hold weighted means"""
    print_header("TEST 6: Regression Tree")

    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([1.0, 1.0, 5.0, 5.0])
    tree = fit_regression_tree(X, y, max_depth=2)
    assert tree.predict([0.0]) == 1.0
    assert tree.predict([3.0]) == 5.0
    assert fit_regression_tree(X, y, max_depth=0).predict([2.0]) == 3.0
    print("✅ One split separates the two target levels")


def test_json_round_trip():
    """Serialization is canonical and lossless"""
    print_header("TEST 7: JSON Round Trip")

    X, y, w = random_dataset(3)
    tree = fit_tree(X, y, w, max_depth=3, n_actions=4, feature_names=["a", "b", "c"],
                    action_names=["stay", "up", "down", "left"])
    text = serialize_tree(tree)
    again = deserialize_tree(text)
    assert again == tree
    assert serialize_tree(again) == text
    assert np.array_equal(again.predict_batch(X), tree.predict_batch(X))
    assert again.feature_names == ("a", "b", "c")

    regression = fit_regression_tree(X, w, max_depth=2)
    assert deserialize_tree(serialize_tree(regression)) == regression
    print(f"✅ {len(text)} bytes, byte-identical after reparse")


def test_parse_errors_have_locations():
    """Malformed documents name the offending location"""
    print_header("TEST 8: Parse Errors")

    X, y, w = random_dataset(4)
    doc = tree_to_document(fit_tree(X, y, w, max_depth=2, n_actions=3))
    internal = next(k for k, n in enumerate(doc["nodes"]) if n["kind"] == "internal")

    bad = copy.deepcopy(doc)
    bad["nodes"][internal]["feature"] = -1
    with pytest.raises(ParseError) as info:
        document_to_tree(bad)
    assert info.value.location == f"/nodes/{internal}/feature"

    bad = copy.deepcopy(doc)
    bad["nodes"][internal]["left"] = internal
    with pytest.raises(ParseError) as info:
        document_to_tree(bad)
    assert info.value.location == f"/nodes/{internal}/left"

    bad = copy.deepcopy(doc)
    bad["nodes"][internal]["feature"] = 99
    with pytest.raises(ParseError) as info:
        document_to_tree(bad)
    assert info.value.location == f"/nodes/{internal}/feature"

    bad = copy.deepcopy(doc)
    bad["max_depth"] = 0
    with pytest.raises(ParseError):
        document_to_tree(bad)

    bad = copy.deepcopy(doc)
    bad["surprise"] = True
    with pytest.raises(ParseError):
        document_to_tree(bad)

    with pytest.raises(ParseError) as info:
        deserialize_tree('{"format": ')
    assert info.value.location.startswith("line 1")
    print("✅ Schema, topology and syntax errors carry their location")


def test_dot_round_trip():
    """DOT text reparses to the same topology"""
    print_header("TEST 9: DOT Topology")

    X, y, w = random_dataset(5)
    tree = fit_tree(X, y, w, max_depth=3, n_actions=3, feature_names=["dx", "dy", "gap"],
                    action_names=["stay", "up", "down"])
    topology = dot_topology(tree_to_dot(tree))
    assert len(topology.nodes) == len(tree.nodes)
    expected_edges = []
    for k, node in enumerate(tree.nodes):
        if node.is_leaf:
            assert topology.nodes[k] == tree.action_names[node.action]
        else:
            name = tree.feature_names[node.feature]
            assert topology.nodes[k] == name
            expected_edges.append((k, node.left, f"{name} < {node.threshold!r}"))
            expected_edges.append((k, node.right, f"{name} ≥ {node.threshold!r}"))
    assert topology.edges == expected_edges

    with pytest.raises(ParseError) as info:
        dot_topology("digraph tree {\n  n0 [label=\"up\"];\n  garbage\n}\n")
    assert info.value.location == "line 3"
    print(f"✅ {len(topology.nodes)} nodes and {len(topology.edges)} edges recovered")


def test_feature_importance():
    """Importances are normalized gains, uniform for a stump-free tree"""
    print_header("TEST 10: Feature Importance")

    X, y, w = random_dataset(6)
    tree = fit_tree(X, y, w, max_depth=3, n_actions=3)
    importance = feature_importance(tree)
    assert importance.sum() == pytest.approx(1.0)
    assert (importance >= 0).all()

    leaf_only = DecisionTreePolicy([Node(action=1)], n_features=4, n_actions=3, max_depth=0)
    assert list(feature_importance(leaf_only)) == [0.25] * 4

    X2 = np.array([[0.0, 7.0], [1.0, 7.0], [2.0, 7.0], [3.0, 7.0]])
    only_first = fit_tree(X2, np.array([0, 0, 1, 1]), max_depth=2)
    assert list(feature_importance(only_first)) == [1.0, 0.0]
    print("✅ Importances sum to 1")


def test_level_growth():
    """Each level splits the whole frontier; children get the filtered rows"""
    print_header("TEST 11: Level Growth")

    X, y, w = random_dataset(7)
    builder = TreeBuilder(X, y, w, max_depth=3, n_classes=3)
    assert builder.frontier == [0]
    while builder.can_grow():
        depths = {builder.node_depth(n) for n in builder.frontier}
        assert len(depths) == 1
        builder.grow_level()
    assert builder.to_tree() == fit_tree(X, y, w, max_depth=3, n_actions=3)

    # a filter dropping the first half keeps those rows out of every descendant
    filtered = TreeBuilder(X, y, w, max_depth=2, n_classes=3)
    half = len(y) // 2
    filtered.grow_level(lambda routed: {n: rows >= half for n, rows in routed.items()})
    for node in filtered.frontier:
        assert (filtered.node_rows(node) >= half).all()
    print("✅ Breadth-first growth equals plain CART")


def test_projected_predictions():
    """Projected predictions are memo-independent and equal CART at the root"""
    print_header("TEST 12: Projected Predictions")

    X, y, w = random_dataset(8)
    root_only = TreeBuilder(X, y, w, max_depth=3, n_classes=3)
    cart = fit_tree(X, y, w, max_depth=3, n_actions=3)
    assert np.array_equal(root_only.projected_predict_batch(X), cart.predict_batch(X))

    builder = TreeBuilder(X, y, w, max_depth=3, n_classes=3)
    builder.grow_level()
    memo = builder.projected_predict_batch(X, memo=True)
    fresh = builder.projected_predict_batch(X, memo=False)
    assert np.array_equal(memo, fresh)
    assert builder.projected_predict(X[0]) == memo[0]

    # fully grown builders answer with their own leaves
    builder.grow()
    assert np.array_equal(builder.projected_predict_batch(X), builder.to_tree().predict_batch(X))
    print("✅ Projected trees agree with and without memoisation")


def test_document_is_plain_json():
    """Documents survive json.dumps / json.loads unchanged"""
    print_header("TEST 13: Plain Documents")

    X, y, w = random_dataset(9)
    doc = tree_to_document(fit_tree(X, y, w, max_depth=2, n_actions=3))
    assert json.loads(json.dumps(doc)) == doc
    assert doc["format"] == "tree-distiller/decision-tree"
    print("✅ Document is plain JSON data")


def main():
    """Run all tests"""
    print("\n" + "🚀" * 30)
    print("  TREE DISTILLER - DECISION TREE TESTS")
    print("🚀" * 30)

    tests = [
        ("Split Optimality", test_split_is_optimal),
        ("Split Tie-Breaking", test_split_ties_prefer_low_feature_and_threshold),
        ("Weights vs Duplicates", test_weights_match_duplication),
        ("Split Minimum and Weights", test_min_samples_split_counts_weight),
        ("Tree Limits", test_tree_limits),
        ("Weighted Samples", test_weighted_samples),
        ("Regression Tree", test_regression_tree),
        ("JSON Round Trip", test_json_round_trip),
        ("Parse Errors", test_parse_errors_have_locations),
        ("DOT Topology", test_dot_round_trip),
        ("Feature Importance", test_feature_importance),
        ("Level Growth", test_level_growth),
        ("Projected Predictions", test_projected_predictions),
        ("Plain Documents", test_document_is_plain_json),
    ]

    results = []
    for test_name, test_func in tests:
        try:
            test_func()
            results.append((test_name, True))
        except Exception as e:
            print(f"\n❌ Test '{test_name}' failed: {e!r}")
            import traceback
            traceback.print_exc()
            results.append((test_name, False))

    print_header("TEST SUMMARY")
    passed = sum(1 for _, result in results if result)
    for test_name, result in results:
        status = "✅ PASS" if result else "❌ FAIL"
        print(f"{status} - {test_name}")
    print("\n" + "-" * 60)
    print(f"Results: {passed}/{len(results)} tests passed")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
