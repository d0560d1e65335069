"""
Individual and joint performance ratios against the all-expert baseline
"""
import math
from typing import Dict, List, Mapping, Optional, Sequence

from envs.episodes import run_episode
from envs.gridworld import GridWorld
from envs.state import StepOutcome
from experts.policies import Policy
from experts.profile import ExpertProfile
from utils.errors import ZeroBaseline
from utils.log import get_logger
from utils.seeding import EVALUATION, derive_seed, episode_seeds
from .stats import EvalReport, summarize

logger = get_logger(__name__)

METRICS = ("primary", "reward")
RATIO_KINDS = ("individual", "joint")


def episode_metric(env: GridWorld, trace: Sequence[StepOutcome], team: str, metric: str = "primary") -> float:
    """Primary team metric or discounted team return of one episode"""
    if metric == "primary":
        return env.team_metric(trace, team)
    if metric == "reward":
        return env.team_return(trace, team)
    raise ValueError(f"unknown metric '{metric}', expected one of {METRICS}")


def mean_metric(env: GridWorld, policies: Sequence[Policy], team: str, seeds: Sequence[int],
                metric: str = "primary") -> float:
    values = [episode_metric(env, run_episode(env, policies, s), team, metric) for s in seeds]
    return math.fsum(values) / len(values)


def ratio_from_metrics(value: float, baseline: float, lower_is_better: bool, team: str = "") -> float:
    """
    Performance ratio oriented so that 1 is parity and higher is better

    Higher-is-better metrics give value / baseline, lower-is-better metrics
    give baseline / value. Equal metrics give exactly 1. No clamping.

    Args:
        value: Metric with DT policies swapped in
        baseline: All-expert metric on the same episodes
        lower_is_better: Orientation of the metric
        team: Team name for error messages

    Returns:
        Ratio
    """
    if value == baseline:
        return 1.0
    numerator, denominator = (baseline, value) if lower_is_better else (value, baseline)
    if denominator == 0:
        raise ZeroBaseline(team, baseline, value)
    return numerator / denominator


def reward_ratio(expert_return: float, dt_return: float, team: str = "") -> float:
    """||A| - |B|| / A for signed returns: how much more or less B is than A"""
    if expert_return == 0:
        raise ZeroBaseline(team, expert_return, dt_return)
    return abs(abs(expert_return) - abs(dt_return)) / expert_return


def ratio_from_traces(env: GridWorld, dt_traces: Sequence[Sequence[StepOutcome]],
                      expert_traces: Sequence[Sequence[StepOutcome]], team: str, metric: str = "primary") -> float:
    """Ratio of the mean metrics of two sets of recorded episodes"""
    value = math.fsum(episode_metric(env, t, team, metric) for t in dt_traces) / len(dt_traces)
    baseline = math.fsum(episode_metric(env, t, team, metric) for t in expert_traces) / len(expert_traces)
    if metric == "reward":
        return reward_ratio(baseline, value, team)
    return ratio_from_metrics(value, baseline, env.metric_lower_is_better(team), team)


def evaluation_seeds(seed: int, episodes: int) -> List[int]:
    """Episode seeds shared by every profile evaluated under training seed ``seed``"""
    return episode_seeds(derive_seed(seed, EVALUATION), episodes)


def run_ratios(env: GridWorld, experts: ExpertProfile, team: str,
               profiles_by_seed: Mapping[int, Mapping[int, Policy]], episodes: int,
               kind: str = "joint", metric: str = "primary", agents: Optional[Sequence[int]] = None,
               config_digest: str = "") -> EvalReport:
    """
    Performance ratios of per-seed DT profiles on shared evaluation episodes

    Args:
        env: Grid world
        experts: All-expert baseline profile
        team: Team whose metric is compared
        profiles_by_seed: Training seed -> {agent: policy} replacing experts
        episodes: Episodes per seed
        kind: 'individual' (one agent swapped at a time) or 'joint' (whole team)
        metric: 'primary' or 'reward'
        agents: Agents for individual ratios, default every team member
        config_digest: Provenance recorded in the report

    Returns:
        EvalReport; with kind 'individual' it holds one ratio per agent and
        their per-seed mean as 'individual_ratio'
    """
    if kind not in RATIO_KINDS:
        raise ValueError(f"unknown ratio kind '{kind}', expected one of {RATIO_KINDS}")
    members = env.teams[team]
    if kind == "joint":
        swaps = {'joint_ratio': tuple(members)}
    else:
        chosen = members if agents is None else tuple(agents)
        for agent in chosen:
            if agent not in members:
                raise ValueError(f"agent {agent} is not in team '{team}'")
        swaps = {f"individual_ratio[{env.agent_labels[a]}]": (a,) for a in chosen}

    seeds = tuple(sorted(profiles_by_seed))
    values: Dict[str, List[float]] = {name: [] for name in swaps}
    baselines: List[float] = []
    for seed in seeds:
        block = evaluation_seeds(seed, episodes)
        profile = profiles_by_seed[seed]
        baselines.append(mean_metric(env, list(experts.policies), team, block, metric))
        for name, swapped in swaps.items():
            missing = [a for a in swapped if a not in profile]
            if missing:
                raise ValueError(f"profile for seed {seed} has no policy for agents {missing}")
            policies = experts.mixed({a: profile[a] for a in swapped})
            values[name].append(mean_metric(env, policies, team, block, metric))

    report = EvalReport(config_digest=config_digest, seeds=seeds)
    lower = env.metric_lower_is_better(team)
    ratios: Dict[str, List[float]] = {}
    for name, per_seed in values.items():
        try:
            if metric == "reward":
                ratios[name] = [reward_ratio(b, v, team) for v, b in zip(per_seed, baselines)]
            else:
                ratios[name] = [ratio_from_metrics(v, b, lower, team) for v, b in zip(per_seed, baselines)]
        except ZeroBaseline as e:
            logger.warning("%s: %s, reporting absolute metrics", name, e)
            report.flags[f"zero_baseline:{name}"] = str(e)
            report.add(summarize(f"{name}:value", per_seed, episodes))
            report.add(summarize(f"{name}:baseline", baselines, episodes))
            continue
        report.add(summarize(name, ratios[name], episodes))

    if kind == "individual" and len(ratios) == len(swaps):
        mean_per_seed = [math.fsum(r[k] for r in ratios.values()) / len(ratios) for k in range(len(seeds))]
        report.add(summarize("individual_ratio", mean_per_seed, episodes))
    return report


def individual_ratio(env: GridWorld, dt_policies: Mapping[int, Policy], experts: ExpertProfile, team: str,
                     agent: int, episodes: int, seeds: Sequence[int], metric: str = "primary") -> EvalReport:
    """Ratio with only ``agent`` swapped to its DT, evaluated on every seed's shared episodes"""
    return run_ratios(env, experts, team, {s: dt_policies for s in seeds}, episodes,
                      kind="individual", metric=metric, agents=[agent])


def joint_ratio(env: GridWorld, dt_policies: Mapping[int, Policy], experts: ExpertProfile, team: str,
                episodes: int, seeds: Sequence[int], metric: str = "primary") -> EvalReport:
    """Ratio with the whole team swapped to DTs, opponents at the expert"""
    return run_ratios(env, experts, team, {s: dt_policies for s in seeds}, episodes,
                      kind="joint", metric=metric)
