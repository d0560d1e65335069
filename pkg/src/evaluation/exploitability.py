"""
Exact best responses against a frozen team
"""
import math
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from envs.episodes import run_episode
from envs.gridworld import GridWorld
from envs.state import JointState, StepOutcome
from experts.policies import Policy
from experts.profile import ExpertProfile
from utils.errors import StateSpaceTooLarge
from utils.seeding import EXPLOIT, derive_seed, episode_seeds

DEFAULT_STATE_LIMIT = 200000


class BestResponseSolver:
    """
    Backward induction over the opponents' joint actions.

    The team plays its frozen policies; the opponents pick the joint action
    maximizing their discounted mean reward. Values are memoised per joint
    state, so each reachable state is solved once.
    """

    def __init__(self, env: GridWorld, policies: Sequence[Policy], team: str,
                 state_limit: int = DEFAULT_STATE_LIMIT):
        """
        Args:
            env: Grid world
            policies: Per-agent policies; the team's entries are frozen
            team: Team whose policies are frozen
            state_limit: Maximum number of solved states
        """
        self.env = env
        self.policies = list(policies)
        self.team = team
        self.members = env.teams[team]
        self.opponents = env.opponents_of(team)
        self.state_limit = state_limit
        self._joint = list(product(*[range(env.action_count(j)) for j in self.opponents]))
        self._value: Dict[JointState, float] = {}
        self._choice: Dict[JointState, Tuple[int, ...]] = {}

    def utility(self, outcome: StepOutcome) -> float:
        return math.fsum(outcome.rewards[j] for j in self.opponents) / len(self.opponents)

    def value(self, state: JointState) -> float:
        """Optimal opponent value from ``state`` to the horizon"""
        if state.timestep >= self.env.horizon:
            return 0.0
        if state in self._value:
            return self._value[state]
        if len(self._value) >= self.state_limit:
            raise StateSpaceTooLarge(len(self._value) + 1, self.state_limit)

        joint = [0] * self.env.n_agents
        for i in self.members:
            joint[i] = int(self.policies[i].act(self.env, state, i))
        best, best_combo = -math.inf, None
        for combo in self._joint:
            for j, a in zip(self.opponents, combo):
                joint[j] = a
            outcome = self.env.step(state, joint)
            v = self.utility(outcome) + self.env.discount * self.value(outcome.next_state)
            if v > best:
                best, best_combo = v, combo
        self._value[state] = best
        self._choice[state] = best_combo
        return best

    def choice(self, state: JointState) -> Tuple[int, ...]:
        if state not in self._choice:
            self.value(state)
        return self._choice[state]

    @property
    def n_states(self) -> int:
        return len(self._value)

    def incumbent_value(self, trace: Sequence[StepOutcome]) -> float:
        """Opponent return along a recorded episode, accumulated back to front"""
        value = 0.0
        for outcome in reversed(trace):
            value = self.utility(outcome) + self.env.discount * value
        return value


class BestResponsePolicy:
    """State-indexed best response usable as an opponent policy"""

    def __init__(self, solver: BestResponseSolver):
        self.solver = solver

    def act(self, env: GridWorld, state: JointState, agent: int) -> int:
        return self.solver.choice(state)[self.solver.opponents.index(agent)]


def best_response(env: GridWorld, policies: Sequence[Policy], team: str, state: JointState,
                  state_limit: int = DEFAULT_STATE_LIMIT) -> Tuple[float, BestResponsePolicy]:
    """
    Optimal opponent value from ``state`` and the policy attaining it

    Args:
        env: Grid world
        policies: Per-agent policies, the team's are frozen
        team: Frozen team
        state: Start state
        state_limit: Maximum number of solved states

    Returns:
        (value, best response policy)
    """
    solver = BestResponseSolver(env, policies, team, state_limit)
    return solver.value(state), BestResponsePolicy(solver)


@dataclass
class ExploitabilityResult:
    value: float
    best_values: List[float]
    incumbent_values: List[float]
    n_states: int


def exploitability_details(env: GridWorld, team_policies: Mapping[int, Policy], experts: ExpertProfile,
                           team: str, episodes: int, seed: int,
                           incumbent: Optional[Mapping[int, Policy]] = None,
                           state_limit: int = DEFAULT_STATE_LIMIT) -> ExploitabilityResult:
    """
    Mean gap between the best-response and incumbent opponent returns

    Args:
        env: Grid world
        team_policies: Frozen policies of the team's members
        experts: Profile filling every agent not otherwise given
        team: Frozen team
        episodes: Initial states averaged over
        seed: Root seed of the initial-state block
        incumbent: Incumbent opponent policies, default the experts
        state_limit: Maximum number of solved states

    Returns:
        ExploitabilityResult
    """
    policies = experts.mixed({**dict(incumbent or {}), **dict(team_policies)})
    solver = BestResponseSolver(env, policies, team, state_limit)
    best_values, incumbent_values = [], []
    for episode_seed in episode_seeds(derive_seed(seed, EXPLOIT), episodes):
        best_values.append(solver.value(env.reset(episode_seed)))
        incumbent_values.append(solver.incumbent_value(run_episode(env, policies, episode_seed)))
    gaps = [b - v for b, v in zip(best_values, incumbent_values)]
    return ExploitabilityResult(math.fsum(gaps) / len(gaps), best_values, incumbent_values, solver.n_states)


def exploitability(env: GridWorld, team_policies: Mapping[int, Policy], experts: ExpertProfile, team: str,
                   episodes: int = 10, seed: int = 0, incumbent: Optional[Mapping[int, Policy]] = None,
                   state_limit: int = DEFAULT_STATE_LIMIT) -> float:
    """Best-response opponent value minus incumbent opponent value, averaged over initial states"""
    return exploitability_details(env, team_policies, experts, team, episodes, seed, incumbent,
                                  state_limit).value
