"""
Evaluation protocols: performance ratios, cross-play, exploitability, feature importance, ablations
"""
from .stats import MetricSummary, EvalReport, summarize, paired_difference
from .ratios import (
    episode_metric,
    mean_metric,
    ratio_from_metrics,
    ratio_from_traces,
    reward_ratio,
    evaluation_seeds,
    run_ratios,
    individual_ratio,
    joint_ratio
)
from .crossplay import PolicyRegistry, CrossplayMatrix, CrossplayCell, crossplay, EXPERT
from .exploitability import (
    BestResponseSolver,
    BestResponsePolicy,
    ExploitabilityResult,
    best_response,
    exploitability,
    exploitability_details
)
from .features import feature_report, predictor_importance
from .ablation import (
    ABLATION_VARIANTS,
    ABLATIONS_OF_MAVIPER,
    AblationRow,
    ablation_suite,
    ablation_frame,
    algorithm_comparison
)
from .reports import write_csv, concat_frames

__all__ = [
    'MetricSummary',
    'EvalReport',
    'summarize',
    'paired_difference',
    'episode_metric',
    'mean_metric',
    'ratio_from_metrics',
    'ratio_from_traces',
    'reward_ratio',
    'evaluation_seeds',
    'run_ratios',
    'individual_ratio',
    'joint_ratio',
    'PolicyRegistry',
    'CrossplayMatrix',
    'CrossplayCell',
    'crossplay',
    'EXPERT',
    'BestResponseSolver',
    'BestResponsePolicy',
    'ExploitabilityResult',
    'best_response',
    'exploitability',
    'exploitability_details',
    'feature_report',
    'predictor_importance',
    'ABLATION_VARIANTS',
    'AblationRow',
    'ablation_suite',
    'ablation_frame',
    'ABLATIONS_OF_MAVIPER',
    'algorithm_comparison',
    'write_csv',
    'concat_frames'
]
