"""
Aggregated DAgger datasets
"""
from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from dtree.training import WeightedSample
from envs.state import JointState


@dataclass(frozen=True, eq=False)
class Transition:
    """One visited joint state with every agent's observation, expert label and executed action"""
    state: JointState
    observations: Tuple[np.ndarray, ...]
    expert_actions: Tuple[int, ...]
    actions: Tuple[int, ...]
    rewards: Tuple[float, ...]


class AggregatedDataset:
    """
    FIFO-capped store of relabelled transitions.

    Every transition keeps the full joint context so any agent's observation
    matrix, expert labels or loss weights can be produced from one dataset.
    """

    def __init__(self, max_samples: Optional[int] = None, owner_agent: Optional[int] = None,
                 transitions: Iterable[Transition] = ()):
        """
        Args:
            max_samples: Capacity; the oldest transitions are evicted first
            owner_agent: Agent this dataset was collected for, if any
            transitions: Initial content
        """
        self.max_samples = max_samples
        self.owner_agent = owner_agent
        self._items: deque = deque(maxlen=max_samples)
        self._weights: Dict[tuple, float] = {}
        self.extend(transitions)

    def extend(self, transitions: Iterable[Transition]) -> int:
        """
        Append transitions

        Returns:
            Number of transitions evicted to respect the cap; cached
            weights of states no longer held are dropped with them
        """
        before = len(self._items)
        added = 0
        for transition in transitions:
            self._items.append(transition)
            added += 1
        evicted = before + added - len(self._items)
        if evicted and self._weights:
            live = {t.state for t in self._items}
            self._weights = {k: w for k, w in self._weights.items() if k[1] in live}
        return evicted

    def cached_weight_count(self) -> int:
        return len(self._weights)

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[Transition]:
        return iter(self._items)

    def __getitem__(self, index: int) -> Transition:
        return self._items[index]

    @property
    def transitions(self) -> List[Transition]:
        return list(self._items)

    def select(self, indices: Sequence[int]) -> "AggregatedDataset":
        """Uncapped dataset holding the given rows (repeats allowed)"""
        items = self.transitions
        return AggregatedDataset(owner_agent=self.owner_agent, transitions=[items[int(k)] for k in indices])

    def observation_matrix(self, agent: int) -> np.ndarray:
        if not self._items:
            return np.empty((0, 0))
        return np.vstack([t.observations[agent] for t in self._items])

    def action_vector(self, agent: int) -> np.ndarray:
        return np.fromiter((t.expert_actions[agent] for t in self._items), dtype=int, count=len(self._items))

    def loss_weights(self, agent: int, tag: str, weight_fn: Callable[[JointState], float]) -> np.ndarray:
        """
        Per-row loss weights of one agent, cached per (tag, state, agent)

        Args:
            agent: Agent the weights belong to
            tag: Name of the loss, part of the cache key
            weight_fn: Loss of a joint state

        Returns:
            (n,) weights aligned with the rows
        """
        weights = np.empty(len(self._items))
        for row, transition in enumerate(self._items):
            key = (tag, transition.state, agent)
            if key not in self._weights:
                self._weights[key] = float(weight_fn(transition.state))
            weights[row] = self._weights[key]
        return weights

    def samples(self, agent: int, weights: Optional[Sequence[float]] = None) -> List[WeightedSample]:
        """Weighted samples of one agent, each carrying its transition as joint context"""
        weights = np.ones(len(self._items)) if weights is None else np.asarray(weights, dtype=float)
        return [WeightedSample(t.observations[agent], t.expert_actions[agent], float(w), t)
                for t, w in zip(self._items, weights)]
