"""
Run configuration, manifests, artifact layout and command implementations
"""
from .run_config import (
    RunConfig,
    RunSection,
    EvalConfig,
    ALGORITHMS,
    load_run_config,
    load_run_config_text,
    parse_override,
    config_digest,
    dump_run_config
)
from .manifest import RunManifest, file_checksum, read_manifest, verify_manifest, write_manifest
from .artifacts import make_run_dir, save_policy, load_policy_file, load_run, LoadedRun
from .commands import (
    ALGORITHM_LABELS,
    build_workbench,
    train_algorithm,
    run_train,
    run_evaluate,
    run_crossplay,
    run_exploitability,
    run_ablate,
    run_compare,
    export_tree_text
)

__all__ = [
    'RunConfig',
    'RunSection',
    'EvalConfig',
    'ALGORITHMS',
    'load_run_config',
    'load_run_config_text',
    'parse_override',
    'config_digest',
    'dump_run_config',
    'RunManifest',
    'file_checksum',
    'read_manifest',
    'verify_manifest',
    'write_manifest',
    'make_run_dir',
    'save_policy',
    'load_policy_file',
    'load_run',
    'LoadedRun',
    'ALGORITHM_LABELS',
    'build_workbench',
    'train_algorithm',
    'run_train',
    'run_evaluate',
    'run_crossplay',
    'run_exploitability',
    'run_ablate',
    'run_compare',
    'export_tree_text'
]
