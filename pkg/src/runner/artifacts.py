"""
Run directory layout and policy files
"""
import json
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional

from dtree.serialization import TREE_FORMAT, document_to_tree, parse_json, serialize_tree, tree_to_dot
from dtree.tree import DecisionTreePolicy
from extraction.baselines import FITTED_Q_FORMAT, GreedyQPolicy
from utils.errors import ParseError
from .manifest import RunManifest, verify_manifest
from .run_config import RunConfig, load_run_config

CONFIG_NAME = "config.toml"
PROGRESS_NAME = "progress.jsonl"
_POLICY_FILE = re.compile(r"^agent_(\d+)\.json$")
_SEED_DIR = re.compile(r"^seed_(\d+)$")


def make_run_dir(root, digest: str, now: Optional[datetime] = None) -> Path:
    """
    Create ``<root>/<digest[:12]>-<UTC timestamp>``, suffixing -1, -2, ... on collision

    Args:
        root: Artifact root
        digest: Config digest
        now: Timestamp, default the current UTC time

    Returns:
        Newly created directory
    """
    now = now or datetime.now(timezone.utc)
    base = f"{digest[:12]}-{now.strftime('%Y%m%dT%H%M%SZ')}"
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    candidate, suffix = root / base, 0
    while True:
        try:
            candidate.mkdir()
            return candidate
        except FileExistsError:
            suffix += 1
            candidate = root / f"{base}-{suffix}"


def policy_relpath(seed: int, agent: int, suffix: str = ".json") -> str:
    return f"seed_{seed}/agent_{agent}{suffix}"


def save_policy(run_dir, seed: int, agent: int, predictor) -> List[str]:
    """
    Write one agent's policy; trees also get a DOT rendering

    Returns:
        Relative paths written
    """
    run_dir = Path(run_dir)
    json_rel = policy_relpath(seed, agent)
    (run_dir / json_rel).parent.mkdir(parents=True, exist_ok=True)
    if isinstance(predictor, DecisionTreePolicy):
        (run_dir / json_rel).write_text(serialize_tree(predictor), encoding="utf-8")
        dot_rel = policy_relpath(seed, agent, ".dot")
        (run_dir / dot_rel).write_text(tree_to_dot(predictor), encoding="utf-8")
        return [json_rel, dot_rel]
    if isinstance(predictor, GreedyQPolicy):
        (run_dir / json_rel).write_text(json.dumps(predictor.to_document(), indent=2) + "\n", encoding="utf-8")
        return [json_rel]
    raise TypeError(f"cannot save policy of type {type(predictor).__name__}")


def load_policy_document(doc: Dict):
    """Rebuild a tree or greedy-Q policy from its JSON document"""
    if not isinstance(doc, dict):
        raise ParseError("policy document must be a JSON object", "/")
    kind = doc.get("format")
    if kind == TREE_FORMAT:
        return document_to_tree(doc)
    if kind == FITTED_Q_FORMAT:
        return GreedyQPolicy.from_document(doc)
    raise ParseError(f"unknown policy format {kind!r}", "/format")


def load_policy_file(path):
    path = Path(path)
    if not path.exists():
        raise ParseError(f"file not found: {path}")
    return load_policy_document(parse_json(path.read_text(encoding="utf-8")))


@dataclass
class LoadedRun:
    """A verified run directory with its policies"""
    run_dir: Path
    manifest: RunManifest
    config: RunConfig
    policies_by_seed: Dict[int, Dict[int, object]]


def load_run(run_dir) -> LoadedRun:
    """
    Verify a run directory against its manifest and load every policy

    Args:
        run_dir: Directory written by ``run_train``

    Returns:
        LoadedRun
    """
    run_dir = Path(run_dir)
    manifest = verify_manifest(run_dir)
    config = load_run_config(run_dir / CONFIG_NAME)
    policies: Dict[int, Dict[int, object]] = {}
    for rel in manifest.outputs:
        parts = Path(rel).parts
        if len(parts) != 2:
            continue
        seed_match, file_match = _SEED_DIR.match(parts[0]), _POLICY_FILE.match(parts[1])
        if seed_match and file_match:
            seed, agent = int(seed_match.group(1)), int(file_match.group(1))
            policies.setdefault(seed, {})[agent] = load_policy_file(run_dir / rel)
    return LoadedRun(run_dir, manifest, config, {s: dict(sorted(p.items())) for s, p in sorted(policies.items())})
