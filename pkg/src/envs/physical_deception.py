"""
Physical deception: N defenders guard N targets from one adversary that
does not know which target is the true one
"""
from typing import List, Sequence, Tuple

import numpy as np

from utils.errors import ConfigError
from .config import EnvKind
from .gridworld import GridWorld, manhattan
from .state import ADVERSARY_REACHED_TRUE, TARGET_COVERED, Event, JointState, StepOutcome

REACH_BONUS = 5.0
COVER_BONUS = 1.0


class PhysicalDeception(GridWorld):
    """Defenders win by covering every target at once; the adversary wins by reaching the true target"""

    kind = EnvKind.PHYSICAL_DECEPTION
    team_roles = {"defenders": ("defender",), "adversary": ("adversary",)}

    @property
    def n_defenders(self) -> int:
        return self.config.n_agents_per_role["defender"]

    @property
    def adversary(self) -> int:
        return self.n_defenders

    def _check_capacity(self):
        needed = 2 * self.n_defenders + 1
        if needed > self.grid_size ** 2:
            raise ConfigError(f"grid {self.grid_size}x{self.grid_size} cannot hold {needed} distinct entities",
                              key="env.grid_size")

    def _place(self, rng: np.random.Generator) -> JointState:
        cells = self._all_cells()
        order = rng.permutation(len(cells))
        n = self.n_defenders
        chosen = [cells[k] for k in order[:2 * n + 1]]
        true_target = int(rng.integers(n))
        return JointState(agents=tuple(chosen[:n + 1]), landmarks=tuple(chosen[n + 1:]),
                          timestep=0, true_target=true_target)

    def covered_targets(self, state: JointState) -> List[bool]:
        defenders = state.agents[:self.n_defenders]
        return [any(manhattan(d, t) <= self.epsilon for d in defenders) for t in state.landmarks]

    def _outcome(self, next_state: JointState):
        events = []
        covered = self.covered_targets(next_state)
        for k, hit in enumerate(covered):
            if hit:
                events.append(Event(TARGET_COVERED, k))

        distance = manhattan(next_state.agents[self.adversary], next_state.landmarks[next_state.true_target])
        reached = distance <= self.epsilon
        if reached:
            events.append(Event(ADVERSARY_REACHED_TRUE, self.adversary))

        defender_reward = float(distance) + (COVER_BONUS if all(covered) else 0.0)
        adversary_reward = -float(distance) + (REACH_BONUS if reached else 0.0)
        rewards = [defender_reward] * self.n_defenders + [adversary_reward]
        return rewards, events

    def team_metric(self, trace: Sequence[StepOutcome], team: str) -> float:
        """Success indicator: all targets covered in one step (defenders) or true target reached (adversary)"""
        self._check_team(team)
        self._check_complete(trace)
        if team == "defenders":
            n_targets = self.n_defenders
            hit = any(len(out.events_of(TARGET_COVERED)) == n_targets for out in trace)
        else:
            hit = any(out.events_of(ADVERSARY_REACHED_TRUE) for out in trace)
        return 1.0 if hit else 0.0

    def _features(self, state: JointState, agent: int) -> List[float]:
        me = state.agents[agent]
        features: List[float] = []
        for target in state.landmarks:
            features.extend(self._relative(me, target))
        for j, other in enumerate(state.agents):
            if j != agent:
                features.extend(self._relative(me, other))
        if agent != self.adversary:
            features.extend(self._relative(me, state.landmarks[state.true_target]))
        return features

    def _feature_names(self, agent: int) -> Tuple[str, ...]:
        names = []
        for k in range(self.n_defenders):
            names += [f"target{k}_drow", f"target{k}_dcol"]
        for j, label in enumerate(self.agent_labels):
            if j != agent:
                names += [f"{label}_drow", f"{label}_dcol"]
        if agent != self.adversary:
            names += ["true_target_drow", "true_target_dcol"]
        return tuple(names)
