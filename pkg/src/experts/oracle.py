"""
Exact finite-horizon value oracles over the expert profile
"""
import math
import threading
from collections import OrderedDict
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from envs.state import JointState, StepOutcome
from utils.errors import EpisodeOver
from utils.log import get_logger
from .profile import ExpertProfile

logger = get_logger(__name__)


class OracleConfig(BaseModel):
    """Sampling and caching knobs of the Q oracle"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mc_samples: int = Field(16, ge=1)
    enumeration_cap: int = Field(64, ge=1)
    use_cache: bool = True
    cache_limit: int = Field(500_000, ge=1)
    seed: int = Field(0, ge=0, lt=2 ** 64)


@dataclass(frozen=True)
class AllOthers:
    """Expectation over every other agent's action"""


@dataclass(frozen=True)
class OutsideTeam:
    """Expectation over the agents outside ``members``; teammates follow the expert"""
    members: Tuple[int, ...]


Others = Union[AllOthers, OutsideTeam]


class QOracle:
    """
    Q and V of every agent under the expert profile.

    Q at a state executes the given joint action once and then follows the
    expert profile to the horizon. Values are memoised per state so every
    rollout tail is computed once; V and Q share one Bellman expression, which
    makes V(x) == Q(x, expert joint action) hold exactly.
    """

    def __init__(self, profile: ExpertProfile, config: OracleConfig = None):
        """
        Args:
            profile: Expert profile whose values are computed
            config: Oracle configuration
        """
        self.profile = profile
        self.env = profile.env
        self.config = config or OracleConfig()
        self._values: "OrderedDict[JointState, np.ndarray]" = OrderedDict()
        self._q: "OrderedDict[Tuple[JointState, Tuple[int, ...]], np.ndarray]" = OrderedDict()
        self._gaps: "OrderedDict[tuple, float]" = OrderedDict()
        self._lock = threading.RLock()

    # ----------------------------------------------------------------- caches

    # at most cache_limit entries per table, least recently used evicted first

    def _lookup(self, table: OrderedDict, key):
        if not self.config.use_cache:
            return None
        with self._lock:
            value = table.get(key)
            if value is not None:
                table.move_to_end(key)
            return value

    def _store(self, table: OrderedDict, key, value):
        if not self.config.use_cache:
            return
        with self._lock:
            if key in table:
                table.move_to_end(key)
                return
            table[key] = value
            while len(table) > self.config.cache_limit:
                table.popitem(last=False)

    def cache_sizes(self) -> Dict[str, int]:
        with self._lock:
            return {'values': len(self._values), 'q': len(self._q), 'gaps': len(self._gaps)}

    # ----------------------------------------------------------------- values

    def _bellman(self, outcome: StepOutcome, next_values: np.ndarray) -> np.ndarray:
        return np.asarray(outcome.rewards, dtype=float) + self.env.discount * next_values

    def values(self, state: JointState) -> np.ndarray:
        """
        Expert value of every agent at a state

        Args:
            state: Joint state with timestep <= horizon

        Returns:
            Array of per-agent discounted returns
        """
        horizon = self.env.horizon
        if state.timestep > horizon:
            raise EpisodeOver(state.timestep, horizon)

        chain: List[Tuple[JointState, StepOutcome]] = []
        current = state
        while True:
            if current.timestep >= horizon:
                tail = np.zeros(self.env.n_agents)
                break
            cached = self._lookup(self._values, current)
            if cached is not None:
                tail = cached
                break
            outcome = self.env.step(current, self.profile.joint_action(current))
            chain.append((current, outcome))
            current = outcome.next_state

        value = tail
        for visited, outcome in reversed(chain):
            value = self._bellman(outcome, value)
            self._store(self._values, visited, value)
        return value

    def v_value(self, state: JointState, agent: int) -> float:
        """Discounted return of ``agent`` when everyone follows the expert from ``state``"""
        return float(self.values(state)[agent])

    def q_vector(self, state: JointState, joint_action: Sequence[int]) -> np.ndarray:
        """Per-agent Q for one joint action followed by the expert profile"""
        if state.timestep >= self.env.horizon:
            raise EpisodeOver(state.timestep, self.env.horizon)
        key = (state, tuple(int(a) for a in joint_action))
        cached = self._lookup(self._q, key)
        if cached is not None:
            return cached
        outcome = self.env.step(state, key[1])
        q = self._bellman(outcome, self.values(outcome.next_state))
        self._store(self._q, key, q)
        return q

    def q_value(self, state: JointState, agent: int, joint_action: Sequence[int]) -> float:
        return float(self.q_vector(state, joint_action)[agent])

    # ------------------------------------------------------------------- gaps

    def _own_action_values(self, state: JointState, agent: int, joint: List[int]) -> List[float]:
        values = []
        for own in range(self.env.action_count(agent)):
            joint[agent] = own
            values.append(self.q_value(state, agent, joint))
        return values

    def centralized_gap(self, state: JointState, agent: int) -> float:
        """
        Q(x, expert) - min over own actions with every other agent at its expert action

        Args:
            state: Joint state before the horizon
            agent: Agent whose loss is computed

        Returns:
            Non-negative gap
        """
        key = ('centralized', state, agent)
        cached = self._lookup(self._gaps, key)
        if cached is not None:
            return cached
        expert = list(self.profile.joint_action(state))
        own_values = self._own_action_values(state, agent, list(expert))
        gap = own_values[expert[agent]] - min(own_values)
        self._store(self._gaps, key, gap)
        return gap

    def value_gap(self, state: JointState, agent: int) -> float:
        """V(x) - min over own actions, the other agents folded into the environment as experts"""
        key = ('value', state, agent)
        cached = self._lookup(self._gaps, key)
        if cached is not None:
            return cached
        expert = list(self.profile.joint_action(state))
        gap = self.v_value(state, agent) - min(self._own_action_values(state, agent, expert))
        self._store(self._gaps, key, gap)
        return gap

    def _other_agents(self, agent: int, others: Others) -> Tuple[int, ...]:
        if isinstance(others, OutsideTeam):
            if agent not in others.members:
                raise ValueError(f"agent {agent} is not in team {others.members}")
            return tuple(j for j in range(self.env.n_agents) if j not in others.members)
        return tuple(j for j in range(self.env.n_agents) if j != agent)

    def _combinations(self, state: JointState, agent: int, sizes: Sequence[int]) -> Iterable[Tuple[int, ...]]:
        total = int(np.prod(sizes)) if sizes else 1
        cfg = self.config
        if total <= cfg.enumeration_cap or cfg.mc_samples >= total:
            return list(product(*[range(s) for s in sizes]))
        rng = np.random.default_rng([cfg.seed, agent, *state.digest_words()])
        draws = rng.integers(total, size=cfg.mc_samples)
        return [tuple(int(k) for k in np.unravel_index(int(d), sizes)) for d in draws]

    def expected_q_gap(self, state: JointState, agent: int, others: Others = AllOthers()) -> float:
        """
        Expected gap between the expert action and the worst own action,
        averaged uniformly over the joint actions of ``others``

        Enumerated exactly when the joint action count is within the
        enumeration cap (or the MC budget covers it); otherwise averaged over
        seeded uniform draws. Agents outside ``others`` follow the expert.

        Args:
            state: Joint state before the horizon
            agent: Agent whose loss is computed
            others: AllOthers() or OutsideTeam(team members)

        Returns:
            Non-negative expected gap
        """
        if state.timestep >= self.env.horizon:
            raise EpisodeOver(state.timestep, self.env.horizon)
        other_agents = self._other_agents(agent, others)
        key = ('expected', state, agent, other_agents)
        cached = self._lookup(self._gaps, key)
        if cached is not None:
            return cached

        expert = self.profile.joint_action(state)
        sizes = [self.env.action_count(j) for j in other_agents]
        terms = []
        for combo in self._combinations(state, agent, sizes):
            joint = list(expert)
            for j, a in zip(other_agents, combo):
                joint[j] = a
            own_values = self._own_action_values(state, agent, joint)
            terms.append(own_values[expert[agent]] - min(own_values))
        gap = math.fsum(terms) / len(terms)
        self._store(self._gaps, key, gap)
        return gap
