"""
Rollout collection with expert relabelling
"""
from typing import List, Sequence

from envs.gridworld import GridWorld
from experts.policies import ObservationPolicy, Policy
from experts.profile import ExpertProfile
from utils.seeding import episode_seeds
from .dataset import Transition


def _act(actor: Policy, env: GridWorld, state, agent: int, observation, expert_action: int,
         expert_policy: Policy) -> int:
    if actor is expert_policy:
        return expert_action
    if isinstance(actor, ObservationPolicy):
        return int(actor.predictor.predict(observation))
    return int(actor.act(env, state, agent))


def collect_rollouts(env: GridWorld, actors: Sequence[Policy], relabel: ExpertProfile,
                     n_rollouts: int, seed: int) -> List[Transition]:
    """
    Run full episodes with a mix of actors and relabel every visited state

    Args:
        env: Grid world
        actors: One policy per agent (trees wrapped in ObservationPolicy, or experts)
        relabel: Expert profile providing the labels
        n_rollouts: Number of episodes
        seed: Root seed of the episode block

    Returns:
        n_rollouts * horizon transitions in visiting order
    """
    if len(actors) != env.n_agents:
        raise ValueError(f"expected {env.n_agents} actors, got {len(actors)}")
    transitions = []
    for episode_seed in episode_seeds(seed, n_rollouts):
        state = env.reset(episode_seed)
        while state.timestep < env.horizon:
            observations = tuple(env.observe_features(state, i) for i in range(env.n_agents))
            expert = relabel.joint_action(state)
            actions = tuple(
                _act(actor, env, state, i, observations[i], expert[i], relabel.policies[i])
                for i, actor in enumerate(actors)
            )
            outcome = env.step(state, actions)
            transitions.append(Transition(state, observations, expert, actions, outcome.rewards))
            state = outcome.next_state
    return transitions
