"""
Cross-play between policy sources of opposing teams
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from envs.episodes import run_episode
from envs.gridworld import GridWorld
from experts.policies import Policy
from experts.profile import ExpertProfile
from utils.log import progress
from utils.seeding import CROSSPLAY, derive_seed, episode_seeds
from .stats import MetricSummary, summarize

EXPERT = "Expert"


class PolicyRegistry:
    """Named policy sources per team, optionally one profile per training seed"""

    def __init__(self):
        self._sources: Dict[str, Dict[str, Dict[Optional[int], Dict[int, Policy]]]] = {}

    def register(self, label: str, team: str, policies: Mapping[int, Policy], seed: Optional[int] = None):
        """
        Register a source for a team

        Args:
            label: Source label, e.g. 'MAVIPER'
            team: Team the policies play for
            policies: Agent index -> policy for every team member
            seed: Training seed, or None for a seed-independent source
        """
        self._sources.setdefault(team, {}).setdefault(label, {})[seed] = dict(policies)

    @classmethod
    def with_expert(cls, experts: ExpertProfile) -> "PolicyRegistry":
        registry = cls()
        for team, members in experts.team_partition.items():
            registry.register(EXPERT, team, {i: experts.policies[i] for i in members})
        return registry

    def labels(self, team: str) -> List[str]:
        return list(self._sources.get(team, {}))

    def policies(self, team: str, label: str, seed: int) -> Dict[int, Policy]:
        versions = self._sources[team][label]
        if seed in versions:
            return versions[seed]
        if None in versions:
            return versions[None]
        raise KeyError(f"source '{label}' of team '{team}' has no profile for seed {seed}")


@dataclass
class CrossplayCell:
    team_metric: MetricSummary
    opponent_metric: MetricSummary


@dataclass
class CrossplayMatrix:
    """Metrics of every (team source, opponent source) pairing; rows are team sources"""
    team: str
    opponent: str
    rows: List[str]
    cols: List[str]
    cells: Dict[Tuple[str, str], CrossplayCell] = field(default_factory=dict)

    def is_complete(self) -> bool:
        return all((r, c) in self.cells for r in self.rows for c in self.cols)

    def _spread(self, values: List[float]) -> Tuple[float, float]:
        mean = math.fsum(values) / len(values)
        sd = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
        return mean, sd

    def row_summary(self, row: str, exclude: Sequence[str] = (EXPERT,)) -> Tuple[float, float]:
        """Mean and sd of a team source's metric across opponent sources"""
        cols = [c for c in self.cols if c not in exclude] or self.cols
        return self._spread([self.cells[(row, c)].team_metric.mean for c in cols])

    def col_summary(self, col: str, exclude: Sequence[str] = (EXPERT,)) -> Tuple[float, float]:
        """Mean and sd of an opponent source's metric across team sources"""
        rows = [r for r in self.rows if r not in exclude] or self.rows
        return self._spread([self.cells[(r, col)].opponent_metric.mean for r in rows])

    def to_frame(self) -> pd.DataFrame:
        records = []
        for (row, col), cell in self.cells.items():
            records.append({
                'team': self.team, 'team_source': row, 'opponent': self.opponent, 'opponent_source': col,
                'team_metric': cell.team_metric.mean, 'team_metric_sd': cell.team_metric.sd,
                'opponent_metric': cell.opponent_metric.mean, 'opponent_metric_sd': cell.opponent_metric.sd,
                'n_seeds': cell.team_metric.n_seeds, 'n_episodes': cell.team_metric.n_episodes,
            })
        return pd.DataFrame(records)

    def summary_frame(self) -> pd.DataFrame:
        records = []
        for row in self.rows:
            mean, sd = self.row_summary(row)
            records.append({'side': self.team, 'source': row, 'mean': mean, 'sd': sd})
        for col in self.cols:
            mean, sd = self.col_summary(col)
            records.append({'side': self.opponent, 'source': col, 'mean': mean, 'sd': sd})
        return pd.DataFrame(records)


def crossplay(registry: PolicyRegistry, env: GridWorld, experts: ExpertProfile, episodes: int,
              seeds: Sequence[int], team: Optional[str] = None) -> CrossplayMatrix:
    """
    Evaluate every team source against every opponent source on shared seeds

    Args:
        registry: Registered sources
        env: Two-team grid world
        experts: Profile filling any agent a source does not cover
        episodes: Episodes per seed and cell
        seeds: Training seeds; each selects its profile version and episode block
        team: Row team, default the environment's first team

    Returns:
        Complete CrossplayMatrix
    """
    if len(env.teams) != 2:
        raise ValueError(f"cross-play needs two teams, {type(env).__name__} has {len(env.teams)}")
    team = team or next(iter(env.teams))
    opponent = next(t for t in env.teams if t != team)
    rows, cols = registry.labels(team), registry.labels(opponent)
    if len(rows) < 2 or len(cols) < 2:
        raise ValueError(f"cross-play needs >= 2 sources per side, got {rows} vs {cols}")

    matrix = CrossplayMatrix(team, opponent, rows, cols)
    for row in progress(rows, desc="crossplay"):
        for col in cols:
            team_values, opponent_values = [], []
            for seed in seeds:
                policies = experts.mixed({**registry.policies(team, row, seed),
                                          **registry.policies(opponent, col, seed)})
                traces = [run_episode(env, policies, s)
                          for s in episode_seeds(derive_seed(seed, CROSSPLAY), episodes)]
                team_values.append(math.fsum(env.team_metric(t, team) for t in traces) / episodes)
                opponent_values.append(math.fsum(env.team_metric(t, opponent) for t in traces) / episodes)
            matrix.cells[(row, col)] = CrossplayCell(summarize(team, team_values, episodes),
                                                     summarize(opponent, opponent_values, episodes))
    return matrix
