"""
Resampling losses
"""
from typing import Optional, Sequence

import numpy as np

from envs.state import JointState
from experts.oracle import AllOthers, OutsideTeam, QOracle
from .config import ResamplingMode
from .dataset import AggregatedDataset


def compute_loss_weight(oracle: QOracle, state: JointState, agent: int, mode,
                        team: Optional[Sequence[int]] = None) -> float:
    """
    Importance of getting ``agent``'s action right at ``state``

    Args:
        oracle: Q oracle over the expert profile
        state: Visited joint state
        agent: Agent being extracted
        mode: ResamplingMode or its value
        team: Members of the agent's team (MAVIPER_expected only); when the
            team covers every agent the expectation runs over all others

    Returns:
        Non-negative weight
    """
    mode = ResamplingMode(mode)
    if mode is ResamplingMode.UNIFORM:
        return 1.0
    if mode is ResamplingMode.VIPER_SINGLE:
        return oracle.value_gap(state, agent)
    if mode is ResamplingMode.IVIPER_CENTRALIZED:
        return oracle.centralized_gap(state, agent)
    if team is None or len(team) == oracle.env.n_agents or len(team) == 1:
        return oracle.expected_q_gap(state, agent, AllOthers())
    return oracle.expected_q_gap(state, agent, OutsideTeam(tuple(team)))


def loss_weights(oracle: QOracle, dataset: AggregatedDataset, agent: int, mode,
                 team: Optional[Sequence[int]] = None) -> np.ndarray:
    """Weights of every row of ``dataset`` for one agent"""
    mode = ResamplingMode(mode)
    tag = f"{mode.value}:{tuple(team) if team else ''}"
    return dataset.loss_weights(agent, tag, lambda state: compute_loss_weight(oracle, state, agent, mode, team))
