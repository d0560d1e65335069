"""
Imitation DT and Fitted Q-Iteration baselines
"""
import math
from typing import Dict, List, Optional, Sequence

import numpy as np

from dtree.serialization import document_to_tree, tree_to_document
from dtree.training import fit_regression_tree, fit_tree
from dtree.tree import RegressionTree
from envs.gridworld import GridWorld
from experts.profile import ExpertProfile
from utils.config import FQI_BIN_EDGES
from utils.errors import EmptyDataset, ParseError
from utils.log import get_logger
from utils.seeding import BEHAVIOUR, ROLLOUT, derive_seed, episode_seeds, make_rng
from .results import ExtractionResult
from .rollouts import collect_rollouts

logger = get_logger(__name__)

FITTED_Q_FORMAT = "tree-distiller/fitted-q"


def imitation_dt_train(experts: ExpertProfile, env: GridWorld, n_samples: int, max_depth: int, seed: int,
                       agents: Optional[Sequence[int]] = None, criterion: str = "gini",
                       min_samples_split: int = 2) -> ExtractionResult:
    """
    Behavioural cloning on expert rollouts, no resampling

    Args:
        experts: Expert profile driving every agent
        env: Grid world
        n_samples: Exact number of transitions (the last episode is truncated)
        max_depth: Depth budget
        seed: Rollout seed
        agents: Agents to fit, default all
        criterion: Split criterion
        min_samples_split: Minimum routed samples for a split

    Returns:
        ExtractionResult with one tree per agent
    """
    if n_samples < 1:
        raise EmptyDataset("imitation needs at least one sample")
    agents = list(agents) if agents is not None else list(range(env.n_agents))
    n_episodes = math.ceil(n_samples / env.horizon)
    transitions = collect_rollouts(env, list(experts.policies), experts, n_episodes,
                                   derive_seed(seed, ROLLOUT, 0))[:n_samples]

    result = ExtractionResult(algorithm='imitation_dt')
    for agent in agents:
        X = np.vstack([t.observations[agent] for t in transitions])
        y = np.array([t.expert_actions[agent] for t in transitions], dtype=int)
        result.trees[agent] = fit_tree(X, y, max_depth=max_depth, min_samples_split=min_samples_split,
                                       criterion=criterion, n_actions=env.action_count(agent),
                                       feature_names=env.feature_names(agent),
                                       action_names=env.action_names(agent))
    result.progress.append({'algorithm': 'imitation_dt', 'group': 'all', 'iteration': 1,
                            'scores': {}, 'dataset_size': len(transitions)})
    return result


# ------------------------------------------------------------ fitted Q

def bin_features(values, edges: Sequence[float] = FQI_BIN_EDGES) -> np.ndarray:
    """
    Bin index of every value

    Bins are [-inf, e0), [e0, e1), ..., [e_{k-1}, +inf), so a value equal to
    an edge belongs to the bin above it.
    """
    return np.searchsorted(np.asarray(edges, dtype=float), np.asarray(values, dtype=float), side="right")


def fit_q_functions(X: np.ndarray, actions: np.ndarray, rewards: np.ndarray, X_next: np.ndarray,
                    terminal: np.ndarray, n_actions: int, n_iterations: int, discount: float,
                    max_depth: int, min_samples_split: int = 2) -> List[RegressionTree]:
    """
    Fitted Q-Iteration with one regression tree per action

    Args:
        X: (n, d) binned features
        actions: (n,) taken actions
        rewards: (n,) rewards
        X_next: (n, d) binned next features
        terminal: (n,) True where the next state ends the episode
        n_actions: Action count
        n_iterations: Bellman iterations
        discount: Discount factor
        max_depth: Depth of each regression tree
        min_samples_split: Minimum routed samples for a split

    Returns:
        One RegressionTree per action
    """
    X = np.asarray(X, dtype=float)
    X_next = np.asarray(X_next, dtype=float)
    actions = np.asarray(actions, dtype=int)
    rewards = np.asarray(rewards, dtype=float)
    continues = ~np.asarray(terminal, dtype=bool)
    n_features = X.shape[1]
    q = [RegressionTree.constant(0.0, n_features) for _ in range(n_actions)]

    for k in range(n_iterations):
        next_q = np.column_stack([tree.predict_batch(X_next) for tree in q])
        targets = rewards + discount * np.where(continues, next_q.max(axis=1), 0.0)
        updated = []
        for a in range(n_actions):
            rows = actions == a
            if not rows.any():
                updated.append(RegressionTree.constant(0.0, n_features))
                continue
            updated.append(fit_regression_tree(X[rows], targets[rows], max_depth=max_depth,
                                               min_samples_split=min_samples_split))
        q = updated
        logger.debug("fitted Q iteration %d: mean target %.4f", k + 1, float(targets.mean()))
    return q


class GreedyQPolicy:
    """Greedy action over per-action regression trees on binned, scaled observations"""

    def __init__(self, q_trees: Sequence[RegressionTree], scale: float, edges: Sequence[float] = FQI_BIN_EDGES,
                 feature_names: Optional[Sequence[str]] = None, action_names: Optional[Sequence[str]] = None):
        self.q_trees = tuple(q_trees)
        self.scale = float(scale)
        self.edges = tuple(float(e) for e in edges)
        self.n_features = self.q_trees[0].n_features
        self.n_actions = len(self.q_trees)
        self.feature_names = tuple(feature_names) if feature_names is not None else self.q_trees[0].feature_names
        self.action_names = tuple(action_names) if action_names is not None \
            else tuple(str(a) for a in range(self.n_actions))

    def encode(self, X) -> np.ndarray:
        return bin_features(np.asarray(X, dtype=float) * self.scale, self.edges)

    def q_values(self, X) -> np.ndarray:
        Z = self.encode(np.atleast_2d(np.asarray(X, dtype=float)))
        return np.column_stack([tree.predict_batch(Z) for tree in self.q_trees])

    def predict_batch(self, X) -> np.ndarray:
        # argmax keeps the smallest action on ties
        return np.argmax(self.q_values(X), axis=1)

    def predict(self, obs) -> int:
        features = np.asarray(getattr(obs, "features", obs), dtype=float)
        return int(self.predict_batch(features.reshape(1, -1))[0])

    def to_document(self) -> Dict:
        return {
            "format": FITTED_Q_FORMAT,
            "scale": self.scale,
            "bin_edges": list(self.edges),
            "feature_names": list(self.feature_names),
            "action_names": list(self.action_names),
            "q_trees": [tree_to_document(tree) for tree in self.q_trees],
        }

    @classmethod
    def from_document(cls, doc: Dict) -> "GreedyQPolicy":
        if doc.get("format") != FITTED_Q_FORMAT:
            raise ParseError(f"expected format {FITTED_Q_FORMAT!r}", "/format")
        for key in ("scale", "bin_edges", "q_trees"):
            if key not in doc:
                raise ParseError(f"missing field '{key}'", f"/{key}")
        if not doc["q_trees"]:
            raise ParseError("fitted Q document needs at least one tree", "/q_trees")
        trees = []
        for k, tree_doc in enumerate(doc["q_trees"]):
            try:
                trees.append(document_to_tree(tree_doc))
            except ParseError as e:
                raise ParseError(str(e), f"/q_trees/{k}{e.location}")
        return cls(trees, doc["scale"], doc["bin_edges"], doc.get("feature_names"), doc.get("action_names"))

    def __repr__(self) -> str:
        return f"GreedyQPolicy(actions={self.n_actions}, features={self.n_features})"


def _behaviour_transitions(env: GridWorld, n_samples: int, seed: int):
    """Uniform-random joint actions until ``n_samples`` transitions are collected"""
    rng = make_rng(seed, BEHAVIOUR)
    records = []
    for episode_seed in episode_seeds(derive_seed(seed, ROLLOUT, 0), math.ceil(n_samples / env.horizon)):
        state = env.reset(episode_seed)
        while state.timestep < env.horizon and len(records) < n_samples:
            actions = [int(rng.integers(env.action_count(i))) for i in range(env.n_agents)]
            outcome = env.step(state, actions)
            records.append((state, outcome))
            state = outcome.next_state
    return records


def fitted_q_iteration_train(env: GridWorld, n_samples: int, n_q_iterations: int, max_depth: int,
                             seed: int, bins: Sequence[float] = FQI_BIN_EDGES,
                             agents: Optional[Sequence[int]] = None,
                             min_samples_split: int = 2) -> ExtractionResult:
    """
    Offline Fitted Q-Iteration per agent on random-behaviour data

    Observations are scaled by 1 / (grid_size - 1) and binned before fitting.

    Args:
        env: Grid world
        n_samples: Transitions to collect
        n_q_iterations: Bellman iterations
        max_depth: Depth of each regression tree
        seed: Behaviour and episode seed
        bins: Bin edges
        agents: Agents to fit, default all
        min_samples_split: Minimum routed samples for a split

    Returns:
        ExtractionResult holding a GreedyQPolicy per agent
    """
    agents = list(agents) if agents is not None else list(range(env.n_agents))
    records = _behaviour_transitions(env, n_samples, seed)
    scale = 1.0 / (env.grid_size - 1)
    terminal = np.array([o.next_state.timestep >= env.horizon for _, o in records])

    result = ExtractionResult(algorithm='fitted_q')
    for agent in agents:
        X = np.vstack([env.observe_features(s, agent) for s, _ in records])
        X_next = np.vstack([env.observe_features(o.next_state, agent) for _, o in records])
        actions = np.array([o.actions[agent] for _, o in records], dtype=int)
        rewards = np.array([o.rewards[agent] for _, o in records], dtype=float)
        q_trees = fit_q_functions(bin_features(X * scale, bins), actions, rewards,
                                  bin_features(X_next * scale, bins), terminal,
                                  env.action_count(agent), n_q_iterations, env.discount,
                                  max_depth, min_samples_split)
        result.trees[agent] = GreedyQPolicy(q_trees, scale, bins, env.feature_names(agent),
                                            env.action_names(agent))
    result.progress.append({'algorithm': 'fitted_q', 'group': 'all', 'iteration': n_q_iterations,
                            'scores': {}, 'dataset_size': len(records)})
    return result
