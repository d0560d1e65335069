"""
MAVIPER ablations side by side with IVIPER, and paired algorithm comparisons
"""
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import pandas as pd

from envs.gridworld import GridWorld
from experts.oracle import QOracle
from experts.policies import Policy
from experts.profile import ExpertProfile
from extraction.config import ExtractionConfig, ResamplingMode
from extraction.maviper import maviper_train
from extraction.viper import iviper_train
from utils.log import get_logger, progress
from .ratios import RATIO_KINDS, evaluation_seeds, mean_metric, run_ratios
from .stats import EvalReport, paired_difference, summarize

logger = get_logger(__name__)

# label -> (trainer, config updates)
ABLATION_VARIANTS = {
    'MAVIPER': ('maviper', {}),
    'MAVIPER (No Prediction)': ('maviper', {'prediction_module': False}),
    'MAVIPER (IVIPER Resampling)': ('maviper', {'resampling': ResamplingMode.IVIPER_CENTRALIZED}),
    'IVIPER': ('iviper', {}),
}

ABLATIONS_OF_MAVIPER = ('MAVIPER (No Prediction)', 'MAVIPER (IVIPER Resampling)')


@dataclass
class AblationRow:
    variant: str
    kind: str
    report: EvalReport


def variant_config(cfg: ExtractionConfig, variant: str, team: str, seed: int) -> ExtractionConfig:
    _, updates = ABLATION_VARIANTS[variant]
    return cfg.model_copy(update=dict(updates, teams=(team,), seed=seed))


def ablation_suite(env: GridWorld, experts: ExpertProfile, oracle: QOracle, cfg: ExtractionConfig,
                   seeds: Sequence[int], episodes: int, team: Optional[str] = None,
                   config_digest: str = "") -> List[AblationRow]:
    """
    Train every variant on the same seeds and compare their ratios

    Args:
        env: Grid world
        experts: Expert profile
        oracle: Q oracle shared by every variant
        cfg: Base extraction configuration
        seeds: Training seeds shared by all variants
        episodes: Evaluation episodes per seed
        team: Team to extract, default the first team
        config_digest: Provenance recorded in every report

    Returns:
        One row per (variant, ratio kind)
    """
    team = team or next(iter(env.teams))
    rows = []
    for variant, (trainer, _) in ABLATION_VARIANTS.items():
        profiles: Dict[int, dict] = {}
        for seed in progress(seeds, desc=variant):
            variant_cfg = variant_config(cfg, variant, team, seed)
            if trainer == 'maviper':
                result = maviper_train(env, experts, oracle, variant_cfg)
            else:
                result = iviper_train(env, experts, oracle, variant_cfg)
            profiles[seed] = result.replacements()
        for kind in RATIO_KINDS:
            report = run_ratios(env, experts, team, profiles, episodes, kind=kind, config_digest=config_digest)
            rows.append(AblationRow(variant, kind, report))
        logger.info("ablation variant %s done", variant)
    return rows


def ablation_frame(rows: Sequence[AblationRow]) -> pd.DataFrame:
    """
    One row per (variant, ratio kind) with the team-level ratio summary

    ``regression`` is set on a MAVIPER row whose mean ratio falls below
    either MAVIPER ablation of the same kind.
    """
    records = []
    for row in rows:
        name = 'joint_ratio' if row.kind == 'joint' else 'individual_ratio'
        summary = row.report.metrics.get(name)
        records.append({
            'variant': row.variant, 'kind': row.kind,
            'mean': summary.mean if summary else None,
            'sd': summary.sd if summary else None,
            'ci95': summary.ci_half_width if summary else None,
            'n_seeds': len(row.report.seeds),
            'flagged': bool(row.report.flags),
            'regression': False,
            'config_digest': row.report.config_digest,
        })
    frame = pd.DataFrame(records)
    if frame.empty:
        return frame
    for index, record in frame[frame['variant'] == 'MAVIPER'].iterrows():
        if pd.isna(record['mean']):
            continue
        rivals = frame[(frame['kind'] == record['kind']) & frame['variant'].isin(ABLATIONS_OF_MAVIPER)]
        if (rivals['mean'].dropna() > record['mean']).any():
            frame.at[index, 'regression'] = True
    return frame


# ------------------------------------------------------------ algorithm comparison

def algorithm_comparison(env: GridWorld, experts: ExpertProfile, team: str,
                         profiles: Mapping[str, Mapping[int, Mapping[int, Policy]]], episodes: int,
                         metric: str = "primary", pair: Tuple[str, str] = ('MAVIPER', 'IVIPER'),
                         config_digest: str = "") -> EvalReport:
    """
    Joint team metric of several algorithms on shared seeds

    Args:
        env: Grid world
        experts: Expert profile for the agents outside ``team``
        team: Team swapped to the trained policies
        profiles: Algorithm label -> training seed -> {agent: policy}, in the
            order the algorithms are expected to rank
        episodes: Evaluation episodes per seed
        metric: 'primary' or 'reward'
        pair: Labels whose per-seed difference gets a paired interval
        config_digest: Provenance recorded in the report

    Returns:
        EvalReport with ``joint_metric[<label>]`` per algorithm and
        ``paired_difference[<a>-<b>]``; flags 'ranking' and 'paired_ci' when
        the expected order or a clear paired win does not hold
    """
    labels = list(profiles)
    for label in pair:
        if label not in profiles:
            raise ValueError(f"no profiles for '{label}'")
    seeds = tuple(sorted(profiles[labels[0]]))
    members = env.teams[team]

    per_seed: Dict[str, List[float]] = {}
    for label in labels:
        by_seed = profiles[label]
        if tuple(sorted(by_seed)) != seeds:
            raise ValueError(f"'{label}' was trained on seeds {sorted(by_seed)}, expected {list(seeds)}")
        per_seed[label] = [
            mean_metric(env, experts.mixed({a: by_seed[s][a] for a in members}), team,
                        evaluation_seeds(s, episodes), metric)
            for s in seeds
        ]

    report = EvalReport(config_digest=config_digest, seeds=seeds)
    for label in labels:
        report.add(summarize(f"joint_metric[{label}]", per_seed[label], episodes))
    first, second = pair
    difference = paired_difference(f"paired_difference[{first}-{second}]", per_seed[first],
                                   per_seed[second], episodes)
    report.add(difference)

    # higher is better after the sign flip
    sign = -1.0 if (metric == "primary" and env.metric_lower_is_better(team)) else 1.0
    means = [sign * report[f"joint_metric[{label}]"].mean for label in labels]
    if any(a < b for a, b in zip(means, means[1:])):
        report.flags['ranking'] = f"joint {metric} metric is not ordered {' >= '.join(labels)}"
    if sign * difference.mean - difference.ci_half_width <= 0.0:
        report.flags['paired_ci'] = f"95% interval of {first} - {second} does not exclude zero"
    logger.info("compared %s on %d seeds", ", ".join(labels), len(seeds))
    return report
