"""
Scripted expert policies and adapters that let any predictor act in a grid world
"""
from functools import lru_cache
from itertools import permutations, product
from typing import Optional, Protocol, Sequence, Tuple

from envs.gridworld import ACTION_DELTAS, GridWorld, manhattan
from envs.state import JointState, Position

STAY, UP, DOWN, LEFT, RIGHT = range(5)


class Policy(Protocol):
    """Anything that picks an action for one agent in a joint state"""

    def act(self, env: GridWorld, state: JointState, agent: int) -> int:
        ...


def greedy_action(env: GridWorld, state: JointState, agent: int, goal: Position) -> int:
    """
    One-cell step toward a goal along the axis with the larger offset

    Ties prefer the row axis. A blocked primary move falls back to the other
    axis when that axis also has an offset; otherwise the agent stays.

    Args:
        env: Grid world
        state: Joint state
        agent: Moving agent
        goal: Goal cell

    Returns:
        Action index in 0..4
    """
    row, col = state.agents[agent]
    d_row, d_col = goal[0] - row, goal[1] - col
    if d_row == 0 and d_col == 0:
        return STAY
    row_move = (UP if d_row < 0 else DOWN) if d_row else None
    col_move = (LEFT if d_col < 0 else RIGHT) if d_col else None
    order = (row_move, col_move) if abs(d_row) >= abs(d_col) else (col_move, row_move)
    for action in order:
        if action is not None and env.is_legal(state, agent, action):
            return action
    return STAY


@lru_cache(maxsize=1 << 16)
def best_assignment(sources: Tuple[Position, ...], sinks: Tuple[Position, ...]) -> Tuple[int, ...]:
    """
    Brute-force minimum total Manhattan distance assignment

    One-to-one when there are at least as many sinks as sources, otherwise
    every mapping is considered. Candidates are scanned in lexicographic order
    so the first minimum wins.

    Args:
        sources: Agent positions
        sinks: Goal positions

    Returns:
        Sink index for each source
    """
    n, m = len(sources), len(sinks)
    candidates = permutations(range(m), n) if n <= m else product(range(m), repeat=n)
    best, best_cost = None, None
    for candidate in candidates:
        cost = sum(manhattan(sources[i], sinks[k]) for i, k in enumerate(candidate))
        if best_cost is None or cost < best_cost:
            best, best_cost = candidate, cost
    return tuple(best)


class AssignmentExpert:
    """Assign team members to goals by minimum total distance, then step greedily"""

    def __init__(self, members: Sequence[int], goal_team: Optional[str] = None):
        """
        Args:
            members: Agents sharing the assignment, in index order
            goal_team: Chase this team's agents instead of the landmarks
        """
        self.members = tuple(members)
        self.goal_team = goal_team

    def goals(self, env: GridWorld, state: JointState) -> Tuple[Position, ...]:
        if self.goal_team is None:
            return state.landmarks
        return tuple(state.agents[j] for j in env.teams[self.goal_team])

    def act(self, env: GridWorld, state: JointState, agent: int) -> int:
        sinks = self.goals(env, state)
        sources = tuple(state.agents[i] for i in self.members)
        assignment = best_assignment(sources, sinks)
        goal = sinks[assignment[self.members.index(agent)]]
        return greedy_action(env, state, agent, goal)


class NearestTargetExpert:
    """Head for the closest landmark (ties go to the lower index)"""

    def act(self, env: GridWorld, state: JointState, agent: int) -> int:
        me = state.agents[agent]
        distances = [manhattan(me, t) for t in state.landmarks]
        goal = state.landmarks[distances.index(min(distances))]
        return greedy_action(env, state, agent, goal)


class EvasiveExpert:
    """Legal move maximizing the distance to the closest chaser"""

    def __init__(self, chaser_team: str):
        self.chaser_team = chaser_team

    def act(self, env: GridWorld, state: JointState, agent: int) -> int:
        chasers = [state.agents[j] for j in env.teams[self.chaser_team]]
        best_action, best_key = STAY, None
        for action in range(env.action_count(agent)):
            if not env.is_legal(state, agent, action):
                continue
            dest = env.destination(state, agent, action)
            clearance = min(manhattan(dest, c) for c in chasers)
            length = abs(ACTION_DELTAS[action][0]) + abs(ACTION_DELTAS[action][1])
            key = (clearance, length)
            # strict improvement keeps the smallest index among ties
            if best_key is None or key > best_key:
                best_action, best_key = action, key
        return best_action


class StayPolicy:
    def act(self, env: GridWorld, state: JointState, agent: int) -> int:
        return STAY


class ObservationPolicy:
    """Adapter for predictors that map an observation vector to an action"""

    def __init__(self, predictor):
        """
        Args:
            predictor: Object with ``predict(features) -> action``
        """
        self.predictor = predictor

    def act(self, env: GridWorld, state: JointState, agent: int) -> int:
        return int(self.predictor.predict(env.observe_features(state, agent)))


def joint_action(env: GridWorld, state: JointState, policies: Sequence[Policy]) -> Tuple[int, ...]:
    return tuple(int(policy.act(env, state, agent)) for agent, policy in enumerate(policies))
