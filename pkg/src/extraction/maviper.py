"""
MAVIPER: joint breadth-first tree growth with teammate-prediction filtering
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from dtree.builder import TreeBuilder
from dtree.tree import DecisionTreePolicy
from envs.gridworld import GridWorld
from experts.oracle import QOracle
from experts.policies import ObservationPolicy
from experts.profile import ExpertProfile
from utils.errors import ConfigError
from utils.log import get_logger
from utils.seeding import RESAMPLE, ROLLOUT, SELECTION, derive_seed
from .config import ExtractionConfig
from .dataset import AggregatedDataset
from .losses import loss_weights
from .resampling import resample_counts
from .results import ExtractionResult, PolicyProfileCandidate, best_candidate, selection_score, stalled
from .rollouts import collect_rollouts

logger = get_logger(__name__)


def threshold_mask(correct: np.ndarray, threshold: int) -> np.ndarray:
    """
    Rows kept by the Build filter

    Args:
        correct: (n, team size) booleans, True where a member's predicted
            action matches its label
        threshold: Minimum number of correct members

    Returns:
        (n,) keep mask
    """
    correct = np.asarray(correct, dtype=bool)
    if correct.ndim != 2:
        raise ValueError("correct must be an (n, team size) matrix")
    return correct.sum(axis=1) >= threshold


def _member_predictions(builder: TreeBuilder, X: np.ndarray, prediction_module: bool) -> np.ndarray:
    if prediction_module:
        return builder.projected_predict_batch(X)
    return builder.to_tree().predict_batch(X)


def _precompute_projections(builders: Mapping[int, TreeBuilder], n_workers: int):
    """Fit every open node's projected tree up front, in parallel"""
    tasks = [(j, node) for j, builder in builders.items() for node in builder.frontier]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        list(pool.map(lambda task: builders[task[0]].projected_tree(task[1]), tasks))


def build_level(builders: Mapping[int, TreeBuilder], agent: int, observations: Mapping[int, np.ndarray],
                labels: Mapping[int, np.ndarray], threshold: int, prediction_module: bool = True,
                n_workers: int = 1) -> int:
    """
    Grow one level of ``agent``'s tree on teammate-filtered data

    A routed row survives when at least ``threshold`` team members (the agent
    included) predict their own expert label for it, using projected final
    trees or, without the prediction module, the current partial trees. The
    whole frontier is filtered before any node is split.

    Args:
        builders: Partial tree of every team member, all indexed by the same rows
        agent: Member whose tree grows
        observations: Observation matrix of every member
        labels: Expert labels of every member
        threshold: Minimum number of correct members
        prediction_module: Use projected trees for teammate predictions
        n_workers: Threads for projected tree precomputation

    Returns:
        Number of nodes split
    """
    team = sorted(builders)

    def keep(routed: Dict[int, np.ndarray]) -> Dict[int, np.ndarray]:
        if threshold == 0 or not routed:
            return {node: np.ones(len(rows), dtype=bool) for node, rows in routed.items()}
        rows = np.unique(np.concatenate(list(routed.values())))
        correct = np.zeros((rows.size, len(team)), dtype=bool)
        for k, j in enumerate(team):
            predicted = _member_predictions(builders[j], observations[j][rows], prediction_module)
            correct[:, k] = predicted == labels[j][rows]
        mask = threshold_mask(correct, threshold)
        return {node: mask[np.searchsorted(rows, node_rows)] for node, node_rows in routed.items()}

    if prediction_module and threshold > 0 and n_workers > 1:
        _precompute_projections(builders, n_workers)
    return builders[agent].grow_level(keep)


def train_joint_trees(dataset: AggregatedDataset, team: Sequence[int], sample_weights: Mapping[int, np.ndarray],
                      cfg: ExtractionConfig, threshold: int, env: Optional[GridWorld] = None,
                      ) -> Tuple[Dict[int, DecisionTreePolicy], List[Tuple[int, int]]]:
    """
    Grow the team's trees together, one level per member in round-robin order

    Args:
        dataset: Joint dataset shared by the team
        team: Member agent indices
        sample_weights: Resampling counts of every member, aligned with the dataset
        cfg: Extraction configuration (depth, criterion, prediction module)
        threshold: Build filter threshold
        env: Grid world supplying feature and action names

    Returns:
        (trees per member, growth log of (agent, level) in growth order)
    """
    team = sorted(team)
    observations = {j: dataset.observation_matrix(j) for j in team}
    labels = {j: dataset.action_vector(j) for j in team}
    builders = {
        j: TreeBuilder(observations[j], labels[j], sample_weights[j], max_depth=cfg.max_depth,
                       min_samples_split=cfg.min_samples_split, criterion=cfg.criterion,
                       n_classes=env.action_count(j) if env else None,
                       feature_names=env.feature_names(j) if env else None,
                       action_names=env.action_names(j) if env else None)
        for j in team
    }

    growth_log = []
    for _ in range(cfg.max_depth):
        for j in team:
            build_level(builders, j, observations, labels, threshold, cfg.prediction_module, cfg.n_workers)
            growth_log.append((j, builders[j].level))
    return {j: builders[j].to_tree() for j in team}, growth_log


def _train_team(env: GridWorld, experts: ExpertProfile, oracle: QOracle, cfg: ExtractionConfig,
                team_name: str, result: ExtractionResult):
    team = list(env.teams[team_name])
    threshold = cfg.threshold_for(len(team))
    mode = cfg.resampling_for('maviper')
    dataset = AggregatedDataset(max_samples=cfg.max_samples)
    eval_seed = derive_seed(cfg.seed, SELECTION)
    candidates: List[PolicyProfileCandidate] = []
    trees: Dict[int, DecisionTreePolicy] = {}

    for m in range(1, cfg.n_iterations + 1):
        # Joint rollout under the previous iteration's team trees, expert opponents
        actors = experts.mixed({j: ObservationPolicy(t) for j, t in trees.items()})
        dataset.extend(collect_rollouts(env, actors, experts, cfg.n_rollouts,
                                        derive_seed(cfg.seed, ROLLOUT, m, *team)))

        # Per-member resampling, then joint growth
        counts = {}
        for j in team:
            weights = loss_weights(oracle, dataset, j, mode, team)
            counts[j] = resample_counts(weights, len(dataset), derive_seed(cfg.seed, RESAMPLE, m, j))
        trees, growth = train_joint_trees(dataset, team, counts, cfg, threshold, env)
        result.growth_log.extend((team_name, j, level) for j, level in growth)

        score = selection_score(env, experts, trees, team_name, cfg.eval_episodes_for_selection, eval_seed)
        candidates.append(PolicyProfileCandidate(dict(trees), m, score))
        result.progress.append({
            'algorithm': 'maviper', 'group': team_name, 'iteration': m,
            'scores': {env.agent_labels[j]: score for j in team}, 'dataset_size': len(dataset),
        })
        logger.info("maviper %s iteration %d: score %.4f, %d samples", team_name, m, score, len(dataset))

        if stalled(candidates, cfg.early_stopping_patience):
            logger.info("maviper %s: no improvement for %d iterations, stopping",
                        team_name, cfg.early_stopping_patience)
            break

    result.candidates[team_name] = candidates
    result.trees.update(best_candidate(candidates).trees)


def maviper_train(env: GridWorld, experts: ExpertProfile, oracle: QOracle, cfg: ExtractionConfig,
                  teams: Optional[Sequence[str]] = None) -> ExtractionResult:
    """
    Joint training of every extracted team

    Teams are trained one after another, each with its opponents held at the
    expert policies.

    Args:
        env: Grid world
        experts: Expert profile
        oracle: Q oracle over ``experts``
        cfg: Extraction configuration
        teams: Team names, default the configured (or all) teams

    Returns:
        ExtractionResult with the selected trees of every member
    """
    teams = cfg.extracted_teams(list(env.teams)) if teams is None else tuple(teams)
    result = ExtractionResult(algorithm='maviper')
    for team_name in teams:
        if team_name not in env.teams:
            raise ConfigError(f"unknown team '{team_name}', expected one of {list(env.teams)}",
                              key="extraction.teams")
        _train_team(env, experts, oracle, cfg, team_name, result)
    return result
