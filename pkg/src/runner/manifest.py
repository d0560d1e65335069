"""
Run manifests: written before results, finalized with artifact checksums
"""
import hashlib
import json
from pathlib import Path
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from utils.errors import ManifestMismatch

MANIFEST_NAME = "manifest.json"


class RunManifest(BaseModel):
    """Provenance and integrity record of one run directory"""

    model_config = ConfigDict(extra="forbid")

    config_digest: str
    seeds: List[int]
    algorithm: str
    environment: str
    depth: int
    status: Literal["running", "complete", "failed"] = "running"
    created_at: str
    wall_clock_seconds: Optional[float] = None
    overrides: List[str] = Field(default_factory=list)
    outputs: List[str] = Field(default_factory=list)
    checksums: Dict[str, str] = Field(default_factory=dict)
    error: Optional[str] = None


def file_checksum(path) -> str:
    """SHA-256 of a file's bytes"""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(run_dir, manifest: RunManifest) -> Path:
    path = Path(run_dir) / MANIFEST_NAME
    path.write_text(json.dumps(manifest.model_dump(mode="json"), indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path


def read_manifest(run_dir) -> RunManifest:
    path = Path(run_dir) / MANIFEST_NAME
    if not path.exists():
        raise ManifestMismatch(str(path), expected="manifest.json", actual="missing")
    return RunManifest.model_validate_json(path.read_text(encoding="utf-8"))


def record_checksums(run_dir, manifest: RunManifest, outputs: List[str]) -> RunManifest:
    """Manifest with the relative output paths and their checksums filled in"""
    run_dir = Path(run_dir)
    checksums = {rel: file_checksum(run_dir / rel) for rel in sorted(outputs)}
    return manifest.model_copy(update={'outputs': sorted(outputs), 'checksums': checksums})


def verify_manifest(run_dir) -> RunManifest:
    """
    Check every recorded artifact against its checksum

    Args:
        run_dir: Run directory

    Returns:
        The validated manifest

    Raises:
        ManifestMismatch: Incomplete run, missing file or changed content
    """
    run_dir = Path(run_dir)
    manifest = read_manifest(run_dir)
    if manifest.status != "complete":
        raise ManifestMismatch(str(run_dir / MANIFEST_NAME), expected="complete", actual=manifest.status)
    for rel, expected in manifest.checksums.items():
        path = run_dir / rel
        if not path.exists():
            raise ManifestMismatch(str(path), expected=expected, actual="missing")
        actual = file_checksum(path)
        if actual != expected:
            raise ManifestMismatch(str(path), expected=expected, actual=actual)
    return manifest
