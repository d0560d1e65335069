"""
Single-agent VIPER and independent per-agent IVIPER
"""
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

from dtree.training import fit_tree
from envs.gridworld import GridWorld
from experts.oracle import QOracle
from experts.policies import ObservationPolicy
from experts.profile import ExpertProfile
from utils.errors import ConfigError
from utils.log import get_logger
from utils.seeding import RESAMPLE, ROLLOUT, SELECTION, derive_seed
from .config import ExtractionConfig, ResamplingMode
from .dataset import AggregatedDataset
from .losses import loss_weights
from .resampling import resample_counts
from .results import ExtractionResult, PolicyProfileCandidate, best_candidate, selection_score, stalled
from .rollouts import collect_rollouts

logger = get_logger(__name__)


def _train_agent(env: GridWorld, experts: ExpertProfile, oracle: QOracle, cfg: ExtractionConfig,
                 agent: int, mode: ResamplingMode, algorithm: str) -> Tuple[List[PolicyProfileCandidate], List[dict]]:
    """DAgger loop for one agent with every other agent at its expert policy"""
    team = env.team_of(agent)
    label = env.agent_labels[agent]
    dataset = AggregatedDataset(max_samples=cfg.max_samples, owner_agent=agent)
    eval_seed = derive_seed(cfg.seed, SELECTION)
    candidates: List[PolicyProfileCandidate] = []
    progress = []
    tree = None

    for m in range(1, cfg.n_iterations + 1):
        # Roll out the previous tree against expert teammates and opponents
        actors = experts.mixed({agent: ObservationPolicy(tree)}) if tree is not None else list(experts.policies)
        dataset.extend(collect_rollouts(env, actors, experts, cfg.n_rollouts,
                                        derive_seed(cfg.seed, ROLLOUT, m, agent)))

        # Resample by loss and fit
        weights = loss_weights(oracle, dataset, agent, mode)
        counts = resample_counts(weights, len(dataset), derive_seed(cfg.seed, RESAMPLE, m, agent))
        tree = fit_tree(dataset.observation_matrix(agent), dataset.action_vector(agent), counts,
                        max_depth=cfg.max_depth, min_samples_split=cfg.min_samples_split,
                        criterion=cfg.criterion, n_actions=env.action_count(agent),
                        feature_names=env.feature_names(agent), action_names=env.action_names(agent))

        score = selection_score(env, experts, {agent: tree}, team, cfg.eval_episodes_for_selection, eval_seed)
        candidates.append(PolicyProfileCandidate({agent: tree}, m, score))
        progress.append({'algorithm': algorithm, 'group': label, 'iteration': m,
                         'scores': {label: score}, 'dataset_size': len(dataset)})
        logger.info("%s %s iteration %d: score %.4f, %d samples", algorithm, label, m, score, len(dataset))

        if stalled(candidates, cfg.early_stopping_patience):
            logger.info("%s %s: no improvement for %d iterations, stopping",
                        algorithm, label, cfg.early_stopping_patience)
            break
    return candidates, progress


def _per_agent(env: GridWorld, experts: ExpertProfile, oracle: QOracle, cfg: ExtractionConfig,
               agents: Sequence[int], mode: ResamplingMode, algorithm: str) -> ExtractionResult:
    def train(agent):
        return _train_agent(env, experts, oracle, cfg, agent, mode, algorithm)

    if cfg.n_workers > 1 and len(agents) > 1:
        with ThreadPoolExecutor(max_workers=cfg.n_workers) as pool:
            outputs = list(pool.map(train, agents))
    else:
        outputs = [train(agent) for agent in agents]

    result = ExtractionResult(algorithm=algorithm)
    for agent, (candidates, progress) in sorted(zip(agents, outputs)):
        label = env.agent_labels[agent]
        result.candidates[label] = candidates
        result.progress.extend(progress)
        result.trees[agent] = best_candidate(candidates).trees[agent]
    return result


def extracted_agents(env: GridWorld, cfg: ExtractionConfig) -> List[int]:
    """Agents of the configured teams, in index order"""
    return sorted(i for team in cfg.extracted_teams(list(env.teams)) for i in env.teams[team])


def iviper_train(env: GridWorld, experts: ExpertProfile, oracle: QOracle, cfg: ExtractionConfig,
                 agents: Optional[Sequence[int]] = None) -> ExtractionResult:
    """
    Independent VIPER for every extracted agent

    Each agent runs its own DAgger loop with the other agents held at their
    expert policies; agents share nothing but the oracle's memo, so the
    training order does not change the trees.

    Args:
        env: Grid world
        experts: Expert profile
        oracle: Q oracle over ``experts``
        cfg: Extraction configuration
        agents: Agents to extract, default every agent of the configured teams

    Returns:
        ExtractionResult with one selected tree per agent
    """
    agents = list(agents) if agents is not None else extracted_agents(env, cfg)
    return _per_agent(env, experts, oracle, cfg, agents, cfg.resampling_for('iviper'), 'iviper')


def viper_train(env: GridWorld, experts: ExpertProfile, oracle: QOracle, cfg: ExtractionConfig,
                agent: int = 0) -> ExtractionResult:
    """
    Single-agent VIPER

    Meant for one-agent environments; with more agents the others are folded
    into the environment at their expert policies.

    Args:
        env: Grid world
        experts: Expert profile
        oracle: Q oracle over ``experts``
        cfg: Extraction configuration
        agent: Agent to extract

    Returns:
        ExtractionResult with one tree
    """
    if not 0 <= agent < env.n_agents:
        raise ConfigError(f"agent {agent} out of range for {env.n_agents} agents")
    return _per_agent(env, experts, oracle, cfg, [agent], cfg.resampling_for('viper'), 'viper')
