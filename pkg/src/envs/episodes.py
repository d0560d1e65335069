"""
Episode execution helpers
"""
import math
from typing import List, Optional, Sequence

from utils.seeding import episode_seeds
from .gridworld import GridWorld
from .state import JointState, StepOutcome


def run_episode(env: GridWorld, policies: Sequence, episode_seed: int,
                start: Optional[JointState] = None) -> List[StepOutcome]:
    """
    Roll out one episode to the horizon

    Args:
        env: Grid world
        policies: One object per agent exposing ``act(env, state, agent)``
        episode_seed: Seed for the initial state
        start: Optional state to start from instead of a fresh reset

    Returns:
        Episode trace, one StepOutcome per timestep
    """
    if len(policies) != env.n_agents:
        raise ValueError(f"expected {env.n_agents} policies, got {len(policies)}")
    state = start if start is not None else env.reset(episode_seed)
    trace = []
    while state.timestep < env.horizon:
        actions = [policy.act(env, state, agent) for agent, policy in enumerate(policies)]
        outcome = env.step(state, actions)
        trace.append(outcome)
        state = outcome.next_state
    return trace


def team_scores(env: GridWorld, policies: Sequence, team: str, seeds: Sequence[int]) -> List[float]:
    """Higher-is-better team score for each episode seed"""
    return [env.team_score(run_episode(env, policies, s), team) for s in seeds]


def mean_team_score(env: GridWorld, policies: Sequence, team: str, n_episodes: int, seed: int) -> float:
    """
    Mean higher-is-better team score over a block of seeded episodes

    Args:
        env: Grid world
        policies: Per-agent policies
        team: Team whose metric is scored
        n_episodes: Number of episodes
        seed: Root seed of the episode block

    Returns:
        Mean score
    """
    scores = team_scores(env, policies, team, episode_seeds(seed, n_episodes))
    return math.fsum(scores) / len(scores)
