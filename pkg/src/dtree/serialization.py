"""
Tree documents (JSON node arrays) and DOT rendering
"""
import json
import re
from dataclasses import dataclass, field
from typing import Dict, List, Tuple, Union

from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match

from utils.errors import ParseError
from .criteria import CRITERIA
from .tree import DecisionTreePolicy, Node, RegressionTree

TREE_FORMAT = "tree-distiller/decision-tree"

Tree = Union[DecisionTreePolicy, RegressionTree]

_INTERNAL = {
    "required": ["kind", "feature", "threshold", "left", "right"],
    "properties": {
        "kind": {"const": "internal"},
        "feature": {"type": "integer", "minimum": 0},
        "threshold": {"type": "number"},
        "left": {"type": "integer"},
        "right": {"type": "integer"},
        "gain": {"type": "number", "minimum": 0},
    },
    "additionalProperties": False,
}

_LEAF = {
    "properties": {
        "kind": {"const": "leaf"},
        "action": {"type": "integer", "minimum": 0},
        "counts": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "value": {"type": "number"},
    },
    "additionalProperties": False,
}

TREE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["format", "kind", "criterion", "max_depth", "n_features", "feature_names", "nodes"],
    "properties": {
        "format": {"const": TREE_FORMAT},
        "kind": {"enum": ["classification", "regression"]},
        "criterion": {"enum": list(CRITERIA)},
        "max_depth": {"type": "integer", "minimum": 0},
        "n_features": {"type": "integer", "minimum": 1},
        "n_actions": {"type": "integer", "minimum": 1},
        "feature_names": {"type": "array", "items": {"type": "string"}},
        "action_names": {"type": "array", "items": {"type": "string"}},
        "nodes": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["kind"],
                "properties": {"kind": {"enum": ["internal", "leaf"]}},
                "allOf": [
                    {"if": {"properties": {"kind": {"const": "internal"}}}, "then": _INTERNAL},
                    {"if": {"properties": {"kind": {"const": "leaf"}}}, "then": _LEAF},
                ],
            },
        },
    },
    "additionalProperties": False,
}

_validator = Draft202012Validator(TREE_SCHEMA)


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path)


# ---------------------------------------------------------------------- JSON

def tree_to_document(tree: Tree) -> Dict:
    """Plain-data document for a tree"""
    regression = isinstance(tree, RegressionTree)
    nodes = []
    for node in tree.nodes:
        if not node.is_leaf:
            nodes.append({"kind": "internal", "feature": node.feature, "threshold": float(node.threshold),
                          "left": node.left, "right": node.right, "gain": float(node.gain)})
        elif regression:
            nodes.append({"kind": "leaf", "value": float(node.value)})
        else:
            nodes.append({"kind": "leaf", "action": node.action, "counts": [float(c) for c in node.counts]})
    doc = {
        "format": TREE_FORMAT,
        "kind": "regression" if regression else "classification",
        "criterion": tree.criterion,
        "max_depth": tree.max_depth,
        "n_features": tree.n_features,
        "feature_names": list(tree.feature_names),
    }
    if not regression:
        doc["n_actions"] = tree.n_actions
        doc["action_names"] = list(tree.action_names)
    doc["nodes"] = nodes
    return doc


def serialize_tree(tree: Tree) -> str:
    """Canonical JSON text; identical trees give identical bytes"""
    return json.dumps(tree_to_document(tree), indent=2) + "\n"


def _check_topology(doc: Dict):
    nodes = doc["nodes"]
    parents = [0] * len(nodes)
    for k, node in enumerate(nodes):
        if node["kind"] != "internal":
            continue
        for side in ("left", "right"):
            child = node[side]
            if not k < child < len(nodes):
                raise ParseError(f"child index {child} out of range ({k}, {len(nodes)})",
                                 _pointer(["nodes", k, side]))
            parents[child] += 1
        if node["feature"] >= doc["n_features"]:
            raise ParseError(f"feature {node['feature']} >= n_features {doc['n_features']}",
                             _pointer(["nodes", k, "feature"]))
    for k in range(1, len(nodes)):
        if parents[k] != 1:
            raise ParseError(f"node has {parents[k]} parents, expected 1", _pointer(["nodes", k]))

    depth = {0: 0}
    for k, node in enumerate(nodes):
        if node["kind"] == "internal":
            depth[node["left"]] = depth[node["right"]] = depth[k] + 1
    deepest = max(depth.values())
    if deepest > doc["max_depth"]:
        raise ParseError(f"tree depth {deepest} exceeds max_depth {doc['max_depth']}", "/max_depth")


def _check_leaves(doc: Dict, regression: bool):
    for k, node in enumerate(doc["nodes"]):
        if node["kind"] != "leaf":
            continue
        if regression:
            if "value" not in node:
                raise ParseError("regression leaf needs a value", _pointer(["nodes", k]))
            continue
        if "action" not in node:
            raise ParseError("classification leaf needs an action", _pointer(["nodes", k]))
        if node["action"] >= doc["n_actions"]:
            raise ParseError(f"action {node['action']} >= n_actions {doc['n_actions']}",
                             _pointer(["nodes", k, "action"]))
        if len(node.get("counts", [])) not in (0, doc["n_actions"]):
            raise ParseError("counts must have one entry per action", _pointer(["nodes", k, "counts"]))


def document_to_tree(doc: Dict) -> Tree:
    """
    Validate a tree document and rebuild the tree

    Args:
        doc: Parsed JSON document

    Returns:
        DecisionTreePolicy or RegressionTree
    """
    error = best_match(_validator.iter_errors(doc))
    if error is not None:
        raise ParseError(error.message, _pointer(error.absolute_path))
    regression = doc["kind"] == "regression"
    if not regression and "n_actions" not in doc:
        raise ParseError("classification tree needs n_actions", "/n_actions")
    if len(doc["feature_names"]) != doc["n_features"]:
        raise ParseError("feature_names must have n_features entries", "/feature_names")
    if not regression and "action_names" in doc and len(doc["action_names"]) != doc["n_actions"]:
        raise ParseError("action_names must have n_actions entries", "/action_names")
    _check_topology(doc)
    _check_leaves(doc, regression)

    nodes = []
    for node in doc["nodes"]:
        if node["kind"] == "internal":
            nodes.append(Node(feature=node["feature"], threshold=float(node["threshold"]),
                              left=node["left"], right=node["right"], gain=float(node.get("gain", 0.0))))
        elif regression:
            nodes.append(Node(value=float(node["value"])))
        else:
            nodes.append(Node(action=node["action"], counts=tuple(float(c) for c in node.get("counts", []))))
    if regression:
        return RegressionTree(nodes, doc["n_features"], doc["max_depth"], doc["feature_names"])
    return DecisionTreePolicy(nodes, doc["n_features"], doc["n_actions"], doc["max_depth"],
                              doc["feature_names"], doc.get("action_names"), doc["criterion"])


def parse_json(text: str) -> Dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, f"line {e.lineno} column {e.colno}")


def deserialize_tree(text: str) -> Tree:
    """Parse canonical JSON text back into a tree"""
    return document_to_tree(parse_json(text))


# ----------------------------------------------------------------------- DOT

def _escape(label: str) -> str:
    return label.replace("\\", "\\\\").replace('"', '\\"')


def _unescape(label: str) -> str:
    return label.replace('\\"', '"').replace("\\\\", "\\")


def _threshold_text(threshold: float) -> str:
    return repr(float(threshold))


def tree_to_dot(tree: Tree) -> str:
    """
    Render a tree as a DOT digraph

    Internal nodes show their feature name, edges carry
    "feature < threshold" / "feature ≥ threshold", and leaves show the
    action name (or value for regression trees).

    Args:
        tree: Tree to render

    Returns:
        DOT text
    """
    lines = ["digraph tree {", '  node [shape=box, fontname="Helvetica"];']
    for k, node in enumerate(tree.nodes):
        if node.is_leaf:
            if isinstance(tree, RegressionTree):
                label = repr(float(node.value))
            else:
                label = tree.action_names[node.action]
            lines.append(f'  n{k} [label="{_escape(label)}", shape=ellipse];')
        else:
            lines.append(f'  n{k} [label="{_escape(tree.feature_names[node.feature])}"];')
    for k, node in enumerate(tree.nodes):
        if node.is_leaf:
            continue
        name = tree.feature_names[node.feature]
        threshold = _threshold_text(node.threshold)
        lines.append(f'  n{k} -> n{node.left} [label="{_escape(f"{name} < {threshold}")}"];')
        lines.append(f'  n{k} -> n{node.right} [label="{_escape(f"{name} ≥ {threshold}")}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass
class DotTopology:
    """Node labels and labelled edges recovered from DOT text"""
    nodes: Dict[int, str] = field(default_factory=dict)
    edges: List[Tuple[int, int, str]] = field(default_factory=list)


_NODE_LINE = re.compile(r'^\s*n(\d+) \[label="((?:[^"\\]|\\.)*)"(?:, shape=\w+)?\];$')
_EDGE_LINE = re.compile(r'^\s*n(\d+) -> n(\d+) \[label="((?:[^"\\]|\\.)*)"\];$')
_FIXED_LINES = ("digraph tree {", "}")


def dot_topology(text: str) -> DotTopology:
    """
    Parse DOT produced by ``tree_to_dot``

    Args:
        text: DOT text

    Returns:
        DotTopology with node labels and edges
    """
    topology = DotTopology()
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped in _FIXED_LINES or stripped.startswith("node ["):
            continue
        edge = _EDGE_LINE.match(line)
        if edge:
            topology.edges.append((int(edge.group(1)), int(edge.group(2)), _unescape(edge.group(3))))
            continue
        node = _NODE_LINE.match(line)
        if node:
            topology.nodes[int(node.group(1))] = _unescape(node.group(2))
            continue
        raise ParseError(f"unrecognised DOT statement: {stripped!r}", f"line {lineno}")
    for src, dst, _ in topology.edges:
        for endpoint in (src, dst):
            if endpoint not in topology.nodes:
                raise ParseError(f"edge references undeclared node n{endpoint}", "edges")
    return topology
