"""
Seed-level summary statistics and evaluation reports
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from utils.config import CI_Z


@dataclass(frozen=True)
class MetricSummary:
    """Mean, spread and 95% half-width of one metric over seeds"""
    name: str
    mean: float
    sd: float
    ci_half_width: float
    n_seeds: int
    n_episodes: int
    per_seed: Tuple[float, ...] = ()


def summarize(name: str, per_seed: Sequence[float], n_episodes: int) -> MetricSummary:
    """
    Summarize per-seed values

    Args:
        name: Metric name
        per_seed: One value per seed
        n_episodes: Episodes behind each seed value

    Returns:
        MetricSummary; the half-width is 1.96 sd / sqrt(n seeds)
    """
    if n_episodes < 1:
        raise ValueError("n_episodes must be >= 1")
    values = tuple(float(v) for v in per_seed)
    if not values:
        raise ValueError(f"no values to summarize for '{name}'")
    n = len(values)
    mean = math.fsum(values) / n
    sd = float(np.std(values, ddof=1)) if n > 1 else 0.0
    return MetricSummary(name, mean, sd, CI_Z * sd / math.sqrt(n), n, int(n_episodes), values)


def paired_difference(name: str, a: Sequence[float], b: Sequence[float], n_episodes: int) -> MetricSummary:
    """Summary of per-seed differences a - b on shared seeds"""
    if len(a) != len(b):
        raise ValueError(f"paired samples differ in length: {len(a)} vs {len(b)}")
    return summarize(name, [x - y for x, y in zip(a, b)], n_episodes)


@dataclass
class EvalReport:
    """Metric summaries plus the provenance needed to reproduce them"""
    metrics: Dict[str, MetricSummary] = field(default_factory=dict)
    config_digest: str = ""
    seeds: Tuple[int, ...] = ()
    flags: Dict[str, str] = field(default_factory=dict)

    def add(self, summary: MetricSummary):
        self.metrics[summary.name] = summary

    def __getitem__(self, name: str) -> MetricSummary:
        return self.metrics[name]

    def rows(self, **labels) -> List[Dict]:
        """One row per (metric, seed) plus an aggregate row per metric"""
        rows = []
        for summary in self.metrics.values():
            base = dict(labels, metric=summary.name)
            for seed, value in zip(self.seeds, summary.per_seed):
                rows.append(dict(base, seed=str(seed), value=value, mean=None, sd=None, ci95=None,
                                 n_seeds=1, n_episodes=summary.n_episodes))
            rows.append(dict(base, seed="all", value=summary.mean, mean=summary.mean, sd=summary.sd,
                             ci95=summary.ci_half_width, n_seeds=summary.n_seeds,
                             n_episodes=summary.n_episodes))
        for flag, message in self.flags.items():
            rows.append(dict(labels, metric=f"flag:{flag}", seed="all", value=None, mean=None, sd=None,
                             ci95=None, n_seeds=len(self.seeds), n_episodes=None, note=message))
        return rows

    def to_frame(self, **labels) -> pd.DataFrame:
        frame = pd.DataFrame(self.rows(**labels))
        frame["config_digest"] = self.config_digest
        return frame
