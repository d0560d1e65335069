"""
Extraction and baseline configuration models
"""
from enum import Enum
from typing import Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from utils.config import DESK_SCALE_PRESET
from utils.errors import ConfigError


class ResamplingMode(str, Enum):
    """Loss used to weight aggregated states before resampling"""
    VIPER_SINGLE = "VIPER_single"
    IVIPER_CENTRALIZED = "IVIPER_centralized"
    MAVIPER_EXPECTED = "MAVIPER_expected"
    UNIFORM = "Uniform"


DEFAULT_RESAMPLING = {
    'viper': ResamplingMode.VIPER_SINGLE,
    'iviper': ResamplingMode.IVIPER_CENTRALIZED,
    'maviper': ResamplingMode.MAVIPER_EXPECTED,
}


class ExtractionConfig(BaseModel):
    """Hyperparameters shared by the DAgger-style trainers"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_iterations: int = Field(DESK_SCALE_PRESET['n_iterations'], ge=1)
    n_rollouts: int = Field(DESK_SCALE_PRESET['n_rollouts'], ge=1)
    max_depth: int = Field(4, ge=0)
    threshold: Optional[int] = Field(None, ge=0)
    resampling: Optional[ResamplingMode] = None
    prediction_module: bool = True
    max_samples: int = Field(DESK_SCALE_PRESET['max_samples'], ge=1)
    eval_episodes_for_selection: int = Field(30, ge=1)
    seed: int = Field(0, ge=0, lt=2 ** 64)
    early_stopping_patience: Optional[int] = Field(None, ge=1)
    min_samples_split: int = Field(2, ge=2)
    criterion: Literal["gini", "entropy"] = "gini"
    n_workers: int = Field(1, ge=1)
    teams: Optional[Tuple[str, ...]] = None

    @model_validator(mode="after")
    def _check_caps(self):
        if self.max_samples < self.n_rollouts:
            raise ValueError(f"max_samples ({self.max_samples}) must be >= n_rollouts ({self.n_rollouts})")
        return self

    def resampling_for(self, algorithm: str) -> ResamplingMode:
        """Configured resampling mode, or the algorithm's default when unset"""
        if self.resampling is not None:
            return self.resampling
        return DEFAULT_RESAMPLING[algorithm]

    def threshold_for(self, team_size: int) -> int:
        """
        Build filter threshold for a team

        Args:
            team_size: Number of agents in the team

        Returns:
            Configured threshold, or team size - 1 when unset
        """
        threshold = self.threshold if self.threshold is not None else team_size - 1
        if not 0 <= threshold <= team_size:
            raise ConfigError(f"threshold {threshold} outside [0, {team_size}]", key="extraction.threshold")
        return threshold

    def extracted_teams(self, available: Sequence[str]) -> Tuple[str, ...]:
        """Teams that receive trees, in environment order"""
        if self.teams is None:
            return tuple(available)
        unknown = [t for t in self.teams if t not in available]
        if unknown:
            raise ConfigError(f"unknown teams {unknown}, expected some of {list(available)}",
                              key="extraction.teams")
        return tuple(t for t in available if t in self.teams)


class BaselineConfig(BaseModel):
    """Sample budgets of the Imitation DT and Fitted Q-Iteration baselines"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    imitation_samples: int = Field(10000, ge=1)
    fqi_samples: int = Field(5000, ge=1)
    fqi_iterations: int = Field(10, ge=1)
