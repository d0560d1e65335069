"""
Environment construction from configuration
"""
from typing import Dict, Type

from utils.errors import ConfigError
from .config import EnvConfig, EnvKind
from .cooperative_navigation import CooperativeNavigation
from .gridworld import GridWorld
from .physical_deception import PhysicalDeception
from .predator_prey import PredatorPrey
from .state import JointState

ENVIRONMENTS: Dict[EnvKind, Type[GridWorld]] = {
    EnvKind.PHYSICAL_DECEPTION: PhysicalDeception,
    EnvKind.COOPERATIVE_NAVIGATION: CooperativeNavigation,
    EnvKind.PREDATOR_PREY: PredatorPrey,
}


def make_env(config: EnvConfig) -> GridWorld:
    """
    Build the grid world described by a config

    Args:
        config: Environment configuration

    Returns:
        GridWorld subclass instance
    """
    try:
        env_class = ENVIRONMENTS[config.env_kind]
    except KeyError:
        raise ConfigError(f"unsupported environment {config.env_kind}", key="env.env_kind")
    return env_class(config)


def reset(config: EnvConfig, episode_seed: int) -> JointState:
    """Initial state of an episode for a config"""
    return make_env(config).reset(episode_seed)
