"""
Utilities package for the tree distiller
"""
from .config import (
    PROJECT_ROOT,
    CONFIGS_DIR,
    ARTIFACT_ROOT,
    DESK_SCALE_PRESET,
    PUBLISHED_HYPERPARAMETERS,
    FQI_BIN_EDGES,
    validate_artifact_root,
    validate_log_level
)
from .errors import (
    DistillerError,
    ConfigError,
    EpisodeOver,
    IncompleteTrace,
    EmptyDataset,
    DimensionMismatch,
    ParseError,
    ZeroBaseline,
    StateSpaceTooLarge,
    ManifestMismatch
)
from .log import get_logger, configure_logging, console, progress
from .seeding import derive_seed, make_rng, episode_seeds

__all__ = [
    'PROJECT_ROOT',
    'CONFIGS_DIR',
    'ARTIFACT_ROOT',
    'DESK_SCALE_PRESET',
    'PUBLISHED_HYPERPARAMETERS',
    'FQI_BIN_EDGES',
    'validate_artifact_root',
    'validate_log_level',
    'DistillerError',
    'ConfigError',
    'EpisodeOver',
    'IncompleteTrace',
    'EmptyDataset',
    'DimensionMismatch',
    'ParseError',
    'ZeroBaseline',
    'StateSpaceTooLarge',
    'ManifestMismatch',
    'get_logger',
    'configure_logging',
    'console',
    'progress',
    'derive_seed',
    'make_rng',
    'episode_seeds'
]
