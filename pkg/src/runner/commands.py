"""
Command implementations behind the CLI
"""
import json
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from dtree.serialization import serialize_tree, tree_to_dot
from dtree.tree import DecisionTreePolicy
from envs.factory import make_env
from envs.gridworld import GridWorld
from evaluation.ablation import ablation_frame, ablation_suite, algorithm_comparison
from evaluation.crossplay import EXPERT, PolicyRegistry, crossplay
from evaluation.exploitability import exploitability_details
from evaluation.features import feature_report
from evaluation.ratios import RATIO_KINDS, run_ratios
from evaluation.reports import concat_frames, write_csv
from evaluation.stats import summarize
from experts.oracle import QOracle
from experts.policies import ObservationPolicy
from experts.profile import ExpertProfile, build_expert_profile
from extraction.baselines import fitted_q_iteration_train, imitation_dt_train
from extraction.maviper import maviper_train
from extraction.results import ExtractionResult
from extraction.viper import extracted_agents, iviper_train, viper_train
from utils.config import ARTIFACT_ROOT
from utils.errors import ConfigError, ParseError
from utils.log import console, get_logger, progress
from .artifacts import CONFIG_NAME, PROGRESS_NAME, load_policy_file, load_run, make_run_dir, save_policy
from .manifest import RunManifest, record_checksums, write_manifest
from .run_config import RunConfig, config_digest, dump_run_config

logger = get_logger(__name__)

ALGORITHM_LABELS = {
    'viper': 'VIPER',
    'iviper': 'IVIPER',
    'maviper': 'MAVIPER',
    'imitation_dt': 'ImitationDT',
    'fitted_q': 'FittedQ',
}


def build_workbench(cfg: RunConfig) -> Tuple[GridWorld, ExpertProfile, QOracle]:
    """Environment, expert profile and oracle for a configuration"""
    env = make_env(cfg.env)
    experts = build_expert_profile(env)
    return env, experts, QOracle(experts, cfg.oracle)


def train_algorithm(cfg: RunConfig, seed: int, env: GridWorld, experts: ExpertProfile,
                    oracle: QOracle) -> ExtractionResult:
    """
    Run the configured algorithm for one training seed

    Args:
        cfg: Run configuration
        seed: Training seed
        env: Grid world
        experts: Expert profile
        oracle: Q oracle over ``experts``

    Returns:
        ExtractionResult
    """
    ext = cfg.extraction_for_seed(seed)
    algorithm = cfg.run.algorithm
    agents = extracted_agents(env, ext)
    if algorithm == 'viper':
        return viper_train(env, experts, oracle, ext, agent=agents[0])
    if algorithm == 'iviper':
        return iviper_train(env, experts, oracle, ext, agents)
    if algorithm == 'maviper':
        return maviper_train(env, experts, oracle, ext)
    if algorithm == 'imitation_dt':
        return imitation_dt_train(experts, env, cfg.baselines.imitation_samples, ext.max_depth, seed,
                                  agents=agents, criterion=ext.criterion,
                                  min_samples_split=ext.min_samples_split)
    return fitted_q_iteration_train(env, cfg.baselines.fqi_samples, cfg.baselines.fqi_iterations,
                                    ext.max_depth, seed, agents=agents,
                                    min_samples_split=ext.min_samples_split)


def _now() -> str:
    return datetime.now(timezone.utc).strftime('%Y-%m-%dT%H:%M:%SZ')


def run_train(cfg: RunConfig, overrides: Sequence[str] = (), run_dir=None, artifact_root=None) -> Path:
    """
    Train every configured seed and write the run directory

    The manifest is written with status 'running' before anything else and
    rewritten with checksums once every artifact exists.

    Args:
        cfg: Run configuration
        overrides: Override strings, recorded in the manifest
        run_dir: Explicit output directory
        artifact_root: Root for generated run directories

    Returns:
        Run directory
    """
    digest = config_digest(cfg)
    if run_dir is not None:
        run_dir = Path(run_dir)
        run_dir.mkdir(parents=True, exist_ok=True)
    else:
        run_dir = make_run_dir(artifact_root or ARTIFACT_ROOT, digest)

    manifest = RunManifest(
        config_digest=digest,
        seeds=list(cfg.run.seeds),
        algorithm=cfg.run.algorithm,
        environment=cfg.env.env_kind.value,
        depth=cfg.extraction.max_depth,
        created_at=_now(),
        overrides=list(overrides),
    )
    write_manifest(run_dir, manifest)
    console.print(f"✓ Run directory: {run_dir}")

    start = time.perf_counter()
    outputs = [CONFIG_NAME, PROGRESS_NAME]
    try:
        (run_dir / CONFIG_NAME).write_text(dump_run_config(cfg), encoding="utf-8")
        env, experts, oracle = build_workbench(cfg)
        with open(run_dir / PROGRESS_NAME, "w", encoding="utf-8") as progress_log:
            for seed in progress(cfg.run.seeds, desc="train"):
                result = train_algorithm(cfg, seed, env, experts, oracle)
                for record in result.progress:
                    progress_log.write(json.dumps(dict(record, seed=seed), sort_keys=True) + "\n")
                progress_log.flush()
                for agent, predictor in sorted(result.trees.items()):
                    outputs.extend(save_policy(run_dir, seed, agent, predictor))
                console.print(f"✓ Seed {seed}: {len(result.trees)} {cfg.run.algorithm} policies")
    except Exception as e:
        write_manifest(run_dir, manifest.model_copy(update={
            'status': 'failed', 'error': str(e), 'wall_clock_seconds': time.perf_counter() - start}))
        raise

    final = record_checksums(run_dir, manifest, outputs).model_copy(update={
        'status': 'complete', 'wall_clock_seconds': time.perf_counter() - start})
    write_manifest(run_dir, final)
    console.print(f"✅ Training complete: {len(outputs)} artifacts")
    return run_dir


# ---------------------------------------------------------------- evaluation

def _complete_teams(env: GridWorld, policies_by_seed: Dict[int, Dict[int, object]],
                    team: Optional[str]) -> List[str]:
    teams = [team] if team else list(env.teams)
    for name in teams:
        if name not in env.teams:
            raise ConfigError(f"unknown team '{name}'", key="eval.team")
    return [name for name in teams
            if all(all(i in profile for i in env.teams[name]) for profile in policies_by_seed.values())]


def _wrap(policies_by_seed: Dict[int, Dict[int, object]]) -> Dict[int, Dict[int, ObservationPolicy]]:
    return {s: {i: ObservationPolicy(p) for i, p in profile.items()} for s, profile in policies_by_seed.items()}


def _source(cfg: RunConfig, artifacts) -> Tuple[RunConfig, str, Dict[int, Dict[int, object]], str]:
    """(run config, label, predictors by seed, digest) for an artifact dir, or the expert when None"""
    if artifacts is None:
        return cfg, EXPERT, {}, config_digest(cfg)
    loaded = load_run(artifacts)
    label = ALGORITHM_LABELS[loaded.manifest.algorithm]
    return loaded.config, label, loaded.policies_by_seed, loaded.manifest.config_digest


def run_evaluate(cfg: RunConfig, artifacts=None, out=None) -> pd.DataFrame:
    """
    Performance ratios (and feature importances for tree runs) as CSV

    Without artifacts the expert profile is evaluated against itself.

    Args:
        cfg: Configuration supplying the eval section (and env when no artifacts)
        artifacts: Run directory from ``run_train``
        out: CSV path

    Returns:
        Ratio table
    """
    run_cfg, label, predictors, digest = _source(cfg, artifacts)
    env, experts, _ = build_workbench(run_cfg)
    if artifacts is None:
        full = {i: experts.policies[i] for i in range(env.n_agents)}
        profiles = {s: full for s in run_cfg.run.seeds}
    else:
        profiles = _wrap(predictors)
    kinds = RATIO_KINDS if cfg.eval.kind == "both" else (cfg.eval.kind,)

    frames = []
    for team in _complete_teams(env, profiles, cfg.eval.team):
        for kind in kinds:
            report = run_ratios(env, experts, team, profiles, cfg.eval.episodes, kind=kind,
                                metric=cfg.eval.metric, config_digest=digest)
            frames.append(report.to_frame(algorithm=label, depth=run_cfg.extraction.max_depth,
                                          team=team, kind=kind))
            console.print(f"✓ {label} {team} {kind} ratio evaluated")
    table = concat_frames(frames)

    out = Path(out) if out else (Path(artifacts) if artifacts else Path.cwd()) / "evaluate.csv"
    write_csv(table, out)
    trees = [p for p in predictors.values()]
    if trees:
        features = feature_report(trees, cfg.eval.n_trials, env.agent_labels)
        write_csv(features, out.with_name(f"{out.stem}_features.csv"))
    return table


def run_crossplay(cfg: RunConfig, artifact_dirs: Sequence, out=None) -> pd.DataFrame:
    """
    Cross-play matrix over the expert and every given run

    Args:
        cfg: Configuration supplying the eval section (and env when no artifacts)
        artifact_dirs: Run directories, one source each
        out: CSV path of the matrix; row/column summaries go next to it

    Returns:
        Matrix table, one row per cell
    """
    sources = [_source(cfg, d) for d in artifact_dirs]
    env_cfg = sources[0][0] if sources else cfg
    for run_cfg, label, _, _ in sources:
        if run_cfg.env != env_cfg.env:
            raise ConfigError(f"run '{label}' was trained on a different environment", key="env")
    env, experts, _ = build_workbench(env_cfg)

    registry = PolicyRegistry.with_expert(experts)
    seeds = list(env_cfg.run.seeds)
    used = {EXPERT}
    for _, label, predictors, _ in sources:
        name, k = label, 1
        while name in used:
            k += 1
            name = f"{label}#{k}"
        used.add(name)
        profiles = _wrap(predictors)
        seeds = [s for s in seeds if s in profiles]
        for team, members in env.teams.items():
            if all(all(i in p for i in members) for p in profiles.values()):
                for seed, profile in profiles.items():
                    registry.register(name, team, {i: profile[i] for i in members}, seed=seed)
    if not seeds:
        raise ConfigError("the runs share no training seed", key="run.seeds")

    matrix = crossplay(registry, env, experts, cfg.eval.episodes, seeds, cfg.eval.team)
    table = matrix.to_frame()
    out = Path(out) if out else Path.cwd() / "crossplay.csv"
    write_csv(table, out)
    write_csv(matrix.summary_frame(), out.with_name(f"{out.stem}_summary.csv"))
    console.print(f"✓ Cross-play matrix: {len(matrix.rows)} x {len(matrix.cols)} cells")
    return table


def run_exploitability(cfg: RunConfig, artifacts=None, out=None) -> pd.DataFrame:
    """
    Exact best-response exploitability of every complete team, per seed

    Args:
        cfg: Configuration supplying the eval section (and env when no artifacts)
        artifacts: Run directory, or None for the expert team
        out: CSV path

    Returns:
        One row per (team, seed) plus an aggregate row per team
    """
    run_cfg, label, predictors, digest = _source(cfg, artifacts)
    env, experts, _ = build_workbench(run_cfg)
    if artifacts is None:
        profiles = {s: {i: experts.policies[i] for i in range(env.n_agents)} for s in run_cfg.run.seeds}
    else:
        profiles = _wrap(predictors)

    records = []
    for team in _complete_teams(env, profiles, cfg.eval.team):
        values = []
        for seed, profile in profiles.items():
            details = exploitability_details(env, {i: profile[i] for i in env.teams[team]}, experts, team,
                                             cfg.eval.exploit_episodes, seed, state_limit=cfg.eval.state_limit)
            values.append(details.value)
            records.append({'algorithm': label, 'team': team, 'seed': str(seed),
                            'exploitability': details.value, 'n_states': details.n_states,
                            'config_digest': digest})
        summary = summarize('exploitability', values, cfg.eval.exploit_episodes)
        records.append({'algorithm': label, 'team': team, 'seed': 'all', 'exploitability': summary.mean,
                        'sd': summary.sd, 'ci95': summary.ci_half_width, 'config_digest': digest})
        console.print(f"✓ {label} {team} exploitability {summary.mean:.4f}")
    table = pd.DataFrame(records)
    out = Path(out) if out else (Path(artifacts) if artifacts else Path.cwd()) / "exploitability.csv"
    write_csv(table, out)
    return table


def run_ablate(cfg: RunConfig, out=None) -> pd.DataFrame:
    """Train the MAVIPER ablations and IVIPER on shared seeds and tabulate their ratios"""
    env, experts, oracle = build_workbench(cfg)
    digest = config_digest(cfg)
    rows = ablation_suite(env, experts, oracle, cfg.extraction, list(cfg.run.seeds), cfg.eval.episodes,
                          cfg.eval.team, digest)
    table = ablation_frame(rows)
    out = Path(out) if out else Path.cwd() / "ablation.csv"
    write_csv(table, out)
    details = concat_frames([row.report.to_frame(variant=row.variant, kind=row.kind) for row in rows])
    write_csv(details, out.with_name(f"{out.stem}_details.csv"))

    for _, record in table[table['regression']].iterrows():
        logger.warning("MAVIPER %s ratio %.4f below one of its ablations", record['kind'], record['mean'])
    console.print(f"✓ Ablation table: {len(table)} rows")
    return table


COMPARED_ALGORITHMS = ('maviper', 'iviper', 'fitted_q')


def run_compare(cfg: RunConfig, out=None) -> pd.DataFrame:
    """
    Train MAVIPER, IVIPER and Fitted Q on shared seeds and compare their joint team metric

    Args:
        cfg: Run configuration; run.algorithm is ignored
        out: CSV path, default ./compare.csv

    Returns:
        Report table with one joint metric per algorithm and the paired
        MAVIPER - IVIPER difference
    """
    env, experts, oracle = build_workbench(cfg)
    digest = config_digest(cfg)
    team = cfg.eval.team or next(iter(env.teams))
    extraction = cfg.extraction.model_copy(update={'teams': (team,)})

    profiles = {}
    for algorithm in COMPARED_ALGORITHMS:
        algorithm_cfg = cfg.model_copy(update={'run': cfg.run.model_copy(update={'algorithm': algorithm}),
                                               'extraction': extraction})
        label = ALGORITHM_LABELS[algorithm]
        profiles[label] = {seed: train_algorithm(algorithm_cfg, seed, env, experts, oracle).replacements()
                           for seed in progress(list(cfg.run.seeds), desc=label)}

    report = algorithm_comparison(env, experts, team, profiles, cfg.eval.episodes, cfg.eval.metric,
                                  pair=('MAVIPER', 'IVIPER'), config_digest=digest)
    for flag, message in report.flags.items():
        logger.warning("%s: %s", flag, message)
    table = report.to_frame(team=team)
    out = Path(out) if out else Path.cwd() / "compare.csv"
    write_csv(table, out)
    difference = report["paired_difference[MAVIPER-IVIPER]"]
    console.print(f"✓ MAVIPER - IVIPER {difference.mean:.4f} ± {difference.ci_half_width:.4f}")
    return table


def export_tree_text(path, fmt: str = "json") -> str:
    """
    Render a saved policy file

    Args:
        path: Policy JSON file
        fmt: 'json' or 'dot'

    Returns:
        Canonical JSON or DOT text
    """
    predictor = load_policy_file(path)
    if fmt == "json":
        if isinstance(predictor, DecisionTreePolicy):
            return serialize_tree(predictor)
        return json.dumps(predictor.to_document(), indent=2) + "\n"
    if fmt == "dot":
        if not isinstance(predictor, DecisionTreePolicy):
            raise ParseError("only decision-tree policies have a DOT rendering", "/format")
        return tree_to_dot(predictor)
    raise ConfigError(f"unknown format '{fmt}', expected json or dot", key="format")
