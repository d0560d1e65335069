"""
Decision-tree policy extraction: VIPER, IVIPER, MAVIPER and baselines
"""
from .config import ExtractionConfig, BaselineConfig, ResamplingMode, DEFAULT_RESAMPLING
from .dataset import AggregatedDataset, Transition
from .rollouts import collect_rollouts
from .losses import compute_loss_weight, loss_weights
from .resampling import resample, resample_indices, resample_counts
from .results import ExtractionResult, PolicyProfileCandidate, best_candidate
from .viper import viper_train, iviper_train, extracted_agents
from .maviper import maviper_train, train_joint_trees, build_level, threshold_mask
from .baselines import (
    imitation_dt_train,
    fitted_q_iteration_train,
    fit_q_functions,
    bin_features,
    GreedyQPolicy,
    FITTED_Q_FORMAT
)

__all__ = [
    'ExtractionConfig',
    'BaselineConfig',
    'ResamplingMode',
    'DEFAULT_RESAMPLING',
    'AggregatedDataset',
    'Transition',
    'collect_rollouts',
    'compute_loss_weight',
    'loss_weights',
    'resample',
    'resample_indices',
    'resample_counts',
    'ExtractionResult',
    'PolicyProfileCandidate',
    'best_candidate',
    'viper_train',
    'iviper_train',
    'extracted_agents',
    'maviper_train',
    'train_joint_trees',
    'build_level',
    'threshold_mask',
    'imitation_dt_train',
    'fitted_q_iteration_train',
    'fit_q_functions',
    'bin_features',
    'GreedyQPolicy',
    'FITTED_Q_FORMAT'
]
