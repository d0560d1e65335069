"""
Predator-prey: K slower predators chase M faster prey around L landmarks
"""
from itertools import combinations
from typing import List, Sequence, Tuple

import numpy as np

from utils.config import N_LANDMARKS
from utils.errors import ConfigError
from .config import EnvKind
from .gridworld import GridWorld, sign
from .state import PREDATOR_TOUCH, Event, JointState, Position, StepOutcome

TOUCH_REWARD = 10.0


class PredatorPrey(GridWorld):
    """
    Observations: own position and velocity raw, then sign-binarized
    relative positions of landmarks and other agents (plus relative
    velocity of other prey), then sign-binarized pair offsets within the
    opponent team and within the own team.
    """

    kind = EnvKind.PREDATOR_PREY
    team_roles = {"predators": ("predator",), "prey": ("prey",)}
    fast_roles = ("prey",)
    tracks_velocity = True

    n_landmarks = N_LANDMARKS

    def _check_capacity(self):
        interior = max(self.grid_size - 2, 0) ** 2
        if interior < self.n_landmarks:
            raise ConfigError(f"grid {self.grid_size}x{self.grid_size} has {interior} interior cells, "
                              f"{self.n_landmarks} landmarks need distinct interior cells",
                              key="env.grid_size")
        free = self.grid_size ** 2 - self.n_landmarks
        if free < self.n_agents:
            raise ConfigError(f"grid {self.grid_size}x{self.grid_size} leaves {free} free cells "
                              f"for {self.n_agents} agents", key="env.grid_size")

    def _place(self, rng: np.random.Generator) -> JointState:
        g = self.grid_size
        interior = [(r, c) for r in range(1, g - 1) for c in range(1, g - 1)]
        order = rng.permutation(len(interior))
        landmarks = tuple(interior[k] for k in order[:self.n_landmarks])
        free = [cell for cell in self._all_cells() if cell not in landmarks]
        order = rng.permutation(len(free))
        agents = tuple(free[k] for k in order[:self.n_agents])
        return JointState(agents=agents, landmarks=landmarks, timestep=0,
                          velocities=tuple((0, 0) for _ in agents))

    def blocked(self, state: JointState, cell: Position) -> bool:
        return super().blocked(state, cell) or cell in state.landmarks

    def touches(self, state: JointState) -> List[Tuple[int, int]]:
        positions = state.agents
        return [(p, q) for p in self.teams["predators"] for q in self.teams["prey"]
                if positions[p] == positions[q]]

    def _outcome(self, next_state: JointState):
        touches = self.touches(next_state)
        events = [Event(PREDATOR_TOUCH, p, q) for p, q in touches]
        rewards = []
        for agent in range(self.n_agents):
            if self.roles[agent] == "predator":
                rewards.append(TOUCH_REWARD * len(touches))
            else:
                rewards.append(-TOUCH_REWARD * sum(1 for _, q in touches if q == agent))
        return rewards, events

    def team_metric(self, trace: Sequence[StepOutcome], team: str) -> float:
        """Number of predator-prey touches over the episode"""
        self._check_team(team)
        self._check_complete(trace)
        return float(sum(len(out.events_of(PREDATOR_TOUCH)) for out in trace))

    def metric_lower_is_better(self, team: str) -> bool:
        return team == "prey"

    def _pair_groups(self, agent: int):
        own = self.team_of(agent)
        other = "prey" if own == "predators" else "predators"
        return self.teams[other], self.teams[own]

    def _features(self, state: JointState, agent: int) -> List[float]:
        me = state.agents[agent]
        my_vel = state.velocities[agent]
        features: List[float] = [me[0], me[1], my_vel[0], my_vel[1]]
        for landmark in state.landmarks:
            features += [sign(landmark[0] - me[0]), sign(landmark[1] - me[1])]
        for j, other in enumerate(state.agents):
            if j == agent:
                continue
            features += [sign(other[0] - me[0]), sign(other[1] - me[1])]
            if self.roles[j] == "prey":
                vel = state.velocities[j]
                features += [sign(vel[0] - my_vel[0]), sign(vel[1] - my_vel[1])]
        for group in self._pair_groups(agent):
            for a, b in combinations(group, 2):
                pa, pb = state.agents[a], state.agents[b]
                features += [sign(pa[0] - pb[0]), sign(pa[1] - pb[1])]
        return features

    def _feature_names(self, agent: int) -> Tuple[str, ...]:
        names = ["self_row", "self_col", "self_vrow", "self_vcol"]
        for k in range(self.n_landmarks):
            names += [f"landmark{k}_drow_sign", f"landmark{k}_dcol_sign"]
        for j, label in enumerate(self.agent_labels):
            if j == agent:
                continue
            names += [f"{label}_drow_sign", f"{label}_dcol_sign"]
            if self.roles[j] == "prey":
                names += [f"{label}_dvrow_sign", f"{label}_dvcol_sign"]
        for group in self._pair_groups(agent):
            for a, b in combinations(group, 2):
                la, lb = self.agent_labels[a], self.agent_labels[b]
                names += [f"{la}_{lb}_drow_sign", f"{la}_{lb}_dcol_sign"]
        return tuple(names)

    def binarized_mask(self, agent: int) -> np.ndarray:
        mask = np.ones(len(self.feature_names(agent)), dtype=bool)
        mask[:4] = False
        return mask
