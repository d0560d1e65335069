"""
Feature-importance reports
"""
from typing import Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from dtree.tree import feature_importance


def predictor_importance(predictor) -> np.ndarray:
    """Normalized importances of a tree, or the mean over a greedy-Q policy's trees"""
    q_trees = getattr(predictor, "q_trees", None)
    if q_trees is not None:
        return np.mean([feature_importance(tree) for tree in q_trees], axis=0)
    return feature_importance(predictor)


def feature_report(trees_by_seed: Sequence[Mapping[int, object]], n_trials: Optional[int] = None,
                   agent_labels: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """
    Average feature importances across training seeds

    Args:
        trees_by_seed: One {agent: tree} mapping per seed
        n_trials: Use only the first n seeds, default all
        agent_labels: Display label of every agent index

    Returns:
        Long table with columns agent, agent_label, feature, importance;
        each agent's importances sum to 1
    """
    trials = list(trees_by_seed)[:n_trials] if n_trials is not None else list(trees_by_seed)
    if not trials:
        raise ValueError("feature report needs at least one trial")
    records = []
    for agent in sorted(trials[0]):
        predictors = [trial[agent] for trial in trials]
        names = predictors[0].feature_names
        if any(p.n_features != len(names) for p in predictors):
            raise ValueError(f"agent {agent}: trees disagree on the feature count")
        importance = np.mean([predictor_importance(p) for p in predictors], axis=0)
        label = agent_labels[agent] if agent_labels is not None else str(agent)
        for name, value in zip(names, importance):
            records.append({'agent': agent, 'agent_label': label, 'feature': name, 'importance': float(value)})
    return pd.DataFrame(records, columns=['agent', 'agent_label', 'feature', 'importance'])
