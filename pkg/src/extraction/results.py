"""
Training results shared by every extraction algorithm
"""
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Tuple

from envs.gridworld import GridWorld
from envs.episodes import mean_team_score
from experts.policies import ObservationPolicy
from experts.profile import ExpertProfile


@dataclass
class PolicyProfileCandidate:
    """Trees produced by one iteration, with the score used to pick the best one"""
    trees: Dict[int, Any]
    iteration: int
    selection_score: float


@dataclass
class ExtractionResult:
    """
    Output of a trainer.

    ``trees`` holds the selected predictor of every extracted agent;
    ``candidates`` keeps each selection group's per-iteration candidates
    (one group per agent for IVIPER, one per team for MAVIPER).
    """
    algorithm: str
    trees: Dict[int, Any] = field(default_factory=dict)
    candidates: Dict[str, List[PolicyProfileCandidate]] = field(default_factory=dict)
    progress: List[Dict] = field(default_factory=list)
    growth_log: List[Tuple[str, int, int]] = field(default_factory=list)

    def policies(self, experts: ExpertProfile) -> List:
        """Per-agent policies with every extracted agent replaced by its tree"""
        return experts.mixed({i: ObservationPolicy(t) for i, t in self.trees.items()})

    def replacements(self) -> Dict[int, ObservationPolicy]:
        return {i: ObservationPolicy(t) for i, t in sorted(self.trees.items())}

    def progress_lines(self) -> List[str]:
        return [json.dumps(record, sort_keys=True) for record in self.progress]


def best_candidate(candidates: List[PolicyProfileCandidate]) -> PolicyProfileCandidate:
    """Highest selection score; the earliest iteration wins ties"""
    best = candidates[0]
    for candidate in candidates[1:]:
        if candidate.selection_score > best.selection_score:
            best = candidate
    return best


def selection_score(env: GridWorld, experts: ExpertProfile, trees: Mapping[int, Any], team: str,
                    n_episodes: int, seed: int) -> float:
    """Mean team score with ``trees`` swapped in and everyone else at the expert"""
    policies = experts.mixed({i: ObservationPolicy(t) for i, t in trees.items()})
    return mean_team_score(env, policies, team, n_episodes, seed)


def stalled(candidates: List[PolicyProfileCandidate], patience) -> bool:
    """True when the best score has not improved over the last ``patience`` iterations"""
    if patience is None or len(candidates) <= patience:
        return False
    best = best_candidate(candidates)
    return candidates[-1].iteration - best.iteration >= patience
