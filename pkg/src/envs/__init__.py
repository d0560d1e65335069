"""
Deterministic grid-world environments
"""
from .config import EnvConfig, EnvKind
from .state import (
    JointState,
    Observation,
    Event,
    StepOutcome,
    TARGET_COVERED,
    ADVERSARY_REACHED_TRUE,
    COLLISION,
    PREDATOR_TOUCH
)
from .gridworld import GridWorld, MOVER_ACTIONS, FAST_ACTIONS, ACTION_DELTAS, manhattan
from .physical_deception import PhysicalDeception
from .cooperative_navigation import CooperativeNavigation
from .predator_prey import PredatorPrey
from .factory import make_env, reset
from .episodes import run_episode, team_scores, mean_team_score
from .traces import trace_records, export_trace

__all__ = [
    'EnvConfig',
    'EnvKind',
    'JointState',
    'Observation',
    'Event',
    'StepOutcome',
    'TARGET_COVERED',
    'ADVERSARY_REACHED_TRUE',
    'COLLISION',
    'PREDATOR_TOUCH',
    'GridWorld',
    'MOVER_ACTIONS',
    'FAST_ACTIONS',
    'ACTION_DELTAS',
    'manhattan',
    'PhysicalDeception',
    'CooperativeNavigation',
    'PredatorPrey',
    'make_env',
    'reset',
    'run_episode',
    'team_scores',
    'mean_team_score',
    'trace_records',
    'export_trace'
]
