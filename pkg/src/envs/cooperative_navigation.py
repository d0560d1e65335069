"""
Cooperative navigation: N agents cover N targets while avoiding collisions
"""
from typing import List, Sequence, Tuple

import numpy as np

from utils.errors import ConfigError
from .config import EnvKind
from .gridworld import GridWorld, manhattan
from .state import COLLISION, TARGET_COVERED, Event, JointState, StepOutcome


class CooperativeNavigation(GridWorld):
    """Fully cooperative world with one shared reward"""

    kind = EnvKind.COOPERATIVE_NAVIGATION
    team_roles = {"agents": ("agent",)}

    def _check_capacity(self):
        needed = 2 * self.n_agents
        if needed > self.grid_size ** 2:
            raise ConfigError(f"grid {self.grid_size}x{self.grid_size} cannot hold {needed} distinct entities",
                              key="env.grid_size")

    def _place(self, rng: np.random.Generator) -> JointState:
        cells = self._all_cells()
        order = rng.permutation(len(cells))
        chosen = [cells[k] for k in order[:2 * self.n_agents]]
        return JointState(agents=tuple(chosen[:self.n_agents]), landmarks=tuple(chosen[self.n_agents:]))

    def coverage_distance(self, state: JointState) -> int:
        """Sum over targets of the closest agent's Manhattan distance"""
        return sum(min(manhattan(a, t) for a in state.agents) for t in state.landmarks)

    def _outcome(self, next_state: JointState):
        events = []
        positions = next_state.agents
        for i in range(self.n_agents):
            for j in range(i + 1, self.n_agents):
                if positions[i] == positions[j]:
                    events.append(Event(COLLISION, i, j))
        n_collisions = len(events)
        for k, target in enumerate(next_state.landmarks):
            if min(manhattan(a, target) for a in positions) <= self.epsilon:
                events.append(Event(TARGET_COVERED, k))

        shared = -float(self.coverage_distance(next_state)) - float(n_collisions)
        return [shared] * self.n_agents, events

    def team_metric(self, trace: Sequence[StepOutcome], team: str) -> float:
        """Coverage distance at the final step (lower is better)"""
        self._check_team(team)
        self._check_complete(trace)
        return float(self.coverage_distance(trace[-1].next_state))

    def metric_lower_is_better(self, team: str) -> bool:
        return True

    def _features(self, state: JointState, agent: int) -> List[float]:
        me = state.agents[agent]
        features: List[float] = []
        for target in state.landmarks:
            features.extend(self._relative(me, target))
        for j, other in enumerate(state.agents):
            if j != agent:
                features.extend(self._relative(me, other))
        return features

    def _feature_names(self, agent: int) -> Tuple[str, ...]:
        names = []
        for k in range(self.n_agents):
            names += [f"target{k}_drow", f"target{k}_dcol"]
        for j, label in enumerate(self.agent_labels):
            if j != agent:
                names += [f"{label}_drow", f"{label}_dcol"]
        return tuple(names)
