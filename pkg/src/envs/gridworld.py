"""
Base class for deterministic finite-horizon grid worlds
"""
import math
from typing import Dict, List, Sequence, Tuple

import numpy as np

from utils.errors import ConfigError, EpisodeOver, IncompleteTrace
from .config import EnvConfig, EnvKind
from .state import JointState, Observation, Position, StepOutcome

MOVER_ACTIONS = ("stay", "up", "down", "left", "right")
FAST_ACTIONS = MOVER_ACTIONS + ("up2", "down2", "left2", "right2")
ACTION_DELTAS = ((0, 0), (-1, 0), (1, 0), (0, -1), (0, 1), (-2, 0), (2, 0), (0, -2), (0, 2))


def manhattan(a: Position, b: Position) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def sign(value: int) -> int:
    return (value > 0) - (value < 0)


class GridWorld:
    """
    Shared mechanics of the grid worlds: placement, simultaneous moves,
    clamping, horizon bookkeeping and metric helpers.

    Subclasses define roles, teams, rewards, events, observations and the
    primary team metric.
    """

    kind: EnvKind
    team_roles: Dict[str, Tuple[str, ...]] = {}
    fast_roles: Tuple[str, ...] = ()
    tracks_velocity = False

    def __init__(self, config: EnvConfig):
        """
        Initialize the world from its configuration

        Args:
            config: Validated environment configuration
        """
        if config.env_kind != self.kind:
            raise ConfigError(f"{type(self).__name__} cannot run env_kind={config.env_kind.value}",
                              key="env.env_kind")
        self.config = config
        self.grid_size = config.grid_size
        self.horizon = config.horizon
        self.discount = config.discount
        self.epsilon = config.epsilon_cells

        roles: List[str] = []
        labels: List[str] = []
        for role, count in config.n_agents_per_role.items():
            for k in range(count):
                roles.append(role)
                labels.append(f"{role}{k}")
        self.roles: Tuple[str, ...] = tuple(roles)
        self.agent_labels: Tuple[str, ...] = tuple(labels)
        self.n_agents = len(roles)
        self.teams: Dict[str, Tuple[int, ...]] = {
            team: tuple(i for i, r in enumerate(self.roles) if r in members)
            for team, members in self.team_roles.items()
        }
        self._names_cache: Dict[int, Tuple[str, ...]] = {}
        self._check_capacity()

    # ------------------------------------------------------------------ hooks

    def _check_capacity(self):
        raise NotImplementedError

    def _place(self, rng: np.random.Generator) -> JointState:
        raise NotImplementedError

    def _outcome(self, next_state: JointState):
        """Return (rewards, events) for the state reached by a step"""
        raise NotImplementedError

    def _features(self, state: JointState, agent: int) -> List[float]:
        raise NotImplementedError

    def _feature_names(self, agent: int) -> Tuple[str, ...]:
        raise NotImplementedError

    def team_metric(self, trace: Sequence[StepOutcome], team: str) -> float:
        raise NotImplementedError

    def metric_lower_is_better(self, team: str) -> bool:
        return False

    # -------------------------------------------------------------- dynamics

    def reset(self, episode_seed: int) -> JointState:
        """
        Sample an initial state

        Args:
            episode_seed: 64-bit unsigned episode seed

        Returns:
            Joint state at timestep 0
        """
        rng = np.random.default_rng([int(self.config.seed), int(episode_seed)])
        return self._place(rng)

    def step(self, state: JointState, joint_action: Sequence[int]) -> StepOutcome:
        """
        Apply one simultaneous joint action

        Args:
            state: Current joint state
            joint_action: One action index per agent

        Returns:
            Step outcome with the next state, per-agent rewards and events
        """
        if state.timestep >= self.horizon:
            raise EpisodeOver(state.timestep, self.horizon)
        actions = tuple(int(a) for a in joint_action)
        if len(actions) != self.n_agents:
            raise ValueError(f"expected {self.n_agents} actions, got {len(actions)}")

        positions = []
        velocities = []
        for agent, action in enumerate(actions):
            if not 0 <= action < self.action_count(agent):
                raise ValueError(f"action {action} out of range for agent {agent}")
            start = state.agents[agent]
            dest = self.destination(state, agent, action)
            positions.append(dest)
            velocities.append((dest[0] - start[0], dest[1] - start[1]))

        next_state = JointState(
            agents=tuple(positions),
            landmarks=state.landmarks,
            timestep=state.timestep + 1,
            true_target=state.true_target,
            velocities=tuple(velocities) if self.tracks_velocity else (),
        )
        rewards, events = self._outcome(next_state)
        return StepOutcome(next_state, tuple(float(r) for r in rewards), frozenset(events), actions)

    def blocked(self, state: JointState, cell: Position) -> bool:
        """True when an agent may not end its move on ``cell``"""
        return not (0 <= cell[0] < self.grid_size and 0 <= cell[1] < self.grid_size)

    def destination(self, state: JointState, agent: int, action: int) -> Position:
        """Cell the agent ends on; blocked moves become no-ops"""
        r, c = state.agents[agent]
        dr, dc = ACTION_DELTAS[action]
        dest = (r + dr, c + dc)
        if action and self.blocked(state, dest):
            return (r, c)
        return dest

    def is_legal(self, state: JointState, agent: int, action: int) -> bool:
        """A move is legal when it is 'stay' or is not clamped"""
        if action == 0:
            return True
        r, c = state.agents[agent]
        dr, dc = ACTION_DELTAS[action]
        return not self.blocked(state, (r + dr, c + dc))

    # ---------------------------------------------------------- observations

    def observe(self, state: JointState, agent: int) -> Observation:
        self._check_agent(agent)
        return Observation(self.observe_features(state, agent), self.feature_names(agent),
                           self.binarized_mask(agent))

    def observe_features(self, state: JointState, agent: int) -> np.ndarray:
        return np.asarray(self._features(state, agent), dtype=float)

    def feature_names(self, agent: int) -> Tuple[str, ...]:
        if agent not in self._names_cache:
            self._names_cache[agent] = self._feature_names(agent)
        return self._names_cache[agent]

    def binarized_mask(self, agent: int) -> np.ndarray:
        return np.zeros(len(self.feature_names(agent)), dtype=bool)

    def n_features(self, agent: int) -> int:
        return len(self.feature_names(agent))

    # --------------------------------------------------------- action spaces

    def action_names(self, agent: int) -> Tuple[str, ...]:
        return FAST_ACTIONS if self.roles[agent] in self.fast_roles else MOVER_ACTIONS

    def action_count(self, agent: int) -> int:
        return len(self.action_names(agent))

    # ------------------------------------------------------------------ teams

    def team_of(self, agent: int) -> str:
        for team, members in self.teams.items():
            if agent in members:
                return team
        raise ValueError(f"agent {agent} belongs to no team")

    def opponents_of(self, team: str) -> Tuple[int, ...]:
        members = self.teams[team]
        return tuple(i for i in range(self.n_agents) if i not in members)

    def team_score(self, trace: Sequence[StepOutcome], team: str) -> float:
        """Primary metric oriented so that higher is always better"""
        metric = self.team_metric(trace, team)
        return -metric if self.metric_lower_is_better(team) else metric

    def team_reward(self, outcome: StepOutcome, team: str) -> float:
        """Mean reward of the team's members for one step"""
        members = self.teams[team]
        return math.fsum(outcome.rewards[i] for i in members) / len(members)

    def team_return(self, trace: Sequence[StepOutcome], team: str) -> float:
        """Discounted team reward, accumulated back to front"""
        value = 0.0
        for outcome in reversed(trace):
            value = self.team_reward(outcome, team) + self.discount * value
        return value

    # ---------------------------------------------------------------- helpers

    def _check_agent(self, agent: int):
        if not 0 <= agent < self.n_agents:
            raise ValueError(f"agent index {agent} out of range [0, {self.n_agents})")

    def _check_team(self, team: str):
        if team not in self.teams:
            raise ValueError(f"unknown team '{team}', expected one of {sorted(self.teams)}")

    def _check_complete(self, trace: Sequence[StepOutcome]):
        if not trace or trace[-1].next_state.timestep < self.horizon:
            raise IncompleteTrace(len(trace), self.horizon)

    def _all_cells(self) -> List[Position]:
        return [(r, c) for r in range(self.grid_size) for c in range(self.grid_size)]

    def _relative(self, origin: Position, other: Position) -> Tuple[int, int]:
        return other[0] - origin[0], other[1] - origin[1]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(grid={self.grid_size}, horizon={self.horizon}, agents={self.agent_labels})"
