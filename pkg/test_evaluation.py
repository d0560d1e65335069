"""
Tests for ratios, cross-play, exploitability, feature reports and ablations
"""
import math
import sys
from itertools import product
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from dtree import DecisionTreePolicy, Node
from envs import EnvConfig, make_env, run_episode
from evaluation import (
    ABLATION_VARIANTS,
    EXPERT,
    AblationRow,
    BestResponseSolver,
    EvalReport,
    PolicyRegistry,
    ablation_frame,
    ablation_suite,
    algorithm_comparison,
    best_response,
    crossplay,
    exploitability,
    exploitability_details,
    feature_report,
    paired_difference,
    ratio_from_metrics,
    reward_ratio,
    run_ratios,
    summarize
)
from experts import ExpertProfile, ObservationPolicy, QOracle, StayPolicy, build_expert_profile
from extraction import ExtractionConfig, imitation_dt_train
from utils.errors import StateSpaceTooLarge, ZeroBaseline
from utils.seeding import CROSSPLAY, derive_seed, episode_seeds


def print_header(title):
    """Print section header"""
    print("\n" + "=" * 60)
    print(f"  {title}")
    print("=" * 60)


def workbench(kind, **kwargs):
    env = make_env(EnvConfig(env_kind=kind, **kwargs))
    return env, build_expert_profile(env)


def toward_target_tree():
    """Depth-3 tree stepping one cell toward target 0 from (drow, dcol)"""
    nodes = [
        Node(feature=0, threshold=-0.5, left=1, right=2),
        Node(action=1),
        Node(feature=0, threshold=0.5, left=3, right=4),
        Node(feature=1, threshold=0.0, left=5, right=6),
        Node(action=2),
        Node(action=3),
        Node(action=4),
    ]
    return DecisionTreePolicy(nodes, n_features=2, n_actions=5, max_depth=3)


def test_ratio_arithmetic():
    """Orientation, parity and zero denominators"""
    print_header("TEST 1: Ratio Arithmetic")

    assert ratio_from_metrics(2.0, 4.0, lower_is_better=False) == 0.5
    assert ratio_from_metrics(4.0, 2.0, lower_is_better=True) == 0.5
    assert ratio_from_metrics(3.0, 3.0, lower_is_better=True) == 1.0
    assert ratio_from_metrics(0.0, 0.0, lower_is_better=False) == 1.0
    with pytest.raises(ZeroBaseline):
        ratio_from_metrics(1.0, 0.0, lower_is_better=False, team="defenders")
    with pytest.raises(ZeroBaseline):
        ratio_from_metrics(0.0, 2.0, lower_is_better=True, team="agents")

    assert reward_ratio(-10.0, -10.0) == 0.0
    assert reward_ratio(10.0, 5.0) == 0.5
    with pytest.raises(ZeroBaseline):
        reward_ratio(0.0, 1.0)
    print("✅ 2 touches against 4 gives 0.5 either way round")


def test_identity_ratios():
    """Experts evaluated against themselves give exactly 1"""
    print_header("TEST 2: Identity Ratios")

    for kind, team in (("physical_deception", "defenders"), ("predator_prey", "prey"),
                       ("cooperative_navigation", "agents")):
        env, experts = workbench(kind, horizon=6)
        profile = {i: experts.policies[i] for i in range(env.n_agents)}
        for ratio_kind in ("individual", "joint"):
            report = run_ratios(env, experts, team, {0: profile, 1: profile}, episodes=4, kind=ratio_kind)
            assert not report.flags
            for summary in report.metrics.values():
                assert summary.per_seed == (1.0, 1.0)
                assert summary.mean == 1.0
                assert summary.sd == 0.0
        print(f"✓ {kind}/{team}")
    print("✅ Every identity ratio is exactly 1.0")


def test_superior_policy_ratio():
    """A tree that moves toward the target beats a standing expert"""
    print_header("TEST 3: Ratio Above One")

    env = make_env(EnvConfig(env_kind="cooperative_navigation", grid_size=4, horizon=1,
                             n_agents_per_role={'agent': 1}))
    stay = ExpertProfile(env=env, policies=(StayPolicy(),), roles=env.roles, team_partition=dict(env.teams))
    tree = ObservationPolicy(toward_target_tree())
    report = run_ratios(env, stay, "agents", {0: {0: tree}}, episodes=20, kind="joint")
    ratio = report["joint_ratio"].mean
    assert ratio > 1.0

    individual = run_ratios(env, stay, "agents", {0: {0: tree}}, episodes=20, kind="individual")
    assert individual["individual_ratio"].mean == ratio
    assert individual["individual_ratio[agent0]"].mean == ratio
    print(f"✅ Joint ratio {ratio:.3f}")


def test_reward_metric():
    """The reward metric reports the relative return gap"""
    print_header("TEST 4: Reward Metric")

    env, experts = workbench("cooperative_navigation", horizon=5)
    profile = {i: experts.policies[i] for i in range(env.n_agents)}
    report = run_ratios(env, experts, "agents", {0: profile}, episodes=3, kind="joint", metric="reward")
    assert report["joint_ratio"].mean == 0.0
    print("✅ Identity return gap is 0")


def test_summaries():
    """Mean, sample sd and 95% half-width"""
    print_header("TEST 5: Summaries")

    summary = summarize("joint_ratio", [1.0, 2.0, 3.0, 4.0], n_episodes=100)
    assert summary.mean == 2.5
    assert summary.sd == pytest.approx(math.sqrt(5.0 / 3.0))
    assert summary.ci_half_width == pytest.approx(1.96 * math.sqrt(5.0 / 3.0) / 2.0)
    assert summarize("x", [0.7], 1).ci_half_width == 0.0
    assert paired_difference("gap", [3.0, 5.0], [1.0, 1.0], 10).mean == 3.0
    with pytest.raises(ValueError):
        summarize("x", [], 1)
    with pytest.raises(ValueError):
        paired_difference("gap", [1.0], [1.0, 2.0], 10)
    print("✅ 2.5 ± 1.265")


def test_report_rows():
    """Reports emit per-seed rows, an aggregate row and flag rows"""
    print_header("TEST 6: Report Rows")

    report = EvalReport(config_digest="abc", seeds=(3, 4))
    report.add(summarize("joint_ratio", [0.5, 1.5], 10))
    report.flags["zero_baseline:individual_ratio[defender0]"] = "zero denominator"
    frame = report.to_frame(algorithm="MAVIPER", team="defenders")
    assert list(frame["seed"]) == ["3", "4", "all", "all"]
    assert frame.loc[frame["seed"] == "all", "value"].iloc[0] == 1.0
    assert frame["metric"].iloc[-1].startswith("flag:")
    assert (frame["config_digest"] == "abc").all()
    print("✅ 4 rows with a flag row")


def test_crossplay_matrix():
    """The matrix is complete and the expert cell matches plain expert play"""
    print_header("TEST 7: Cross-play")

    env, experts = workbench("predator_prey", horizon=4)
    registry = PolicyRegistry.with_expert(experts)
    for team, members in env.teams.items():
        registry.register("Stay", team, {i: StayPolicy() for i in members})
    seeds = [0, 1]
    matrix = crossplay(registry, env, experts, episodes=3, seeds=seeds)
    assert matrix.team == "predators"
    assert matrix.is_complete()
    assert len(matrix.to_frame()) == 4

    per_seed = []
    for seed in seeds:
        traces = [run_episode(env, list(experts.policies), s)
                  for s in episode_seeds(derive_seed(seed, CROSSPLAY), 3)]
        per_seed.append(math.fsum(env.team_metric(t, "predators") for t in traces) / 3)
    assert matrix.cells[(EXPERT, EXPERT)].team_metric.mean == math.fsum(per_seed) / 2

    summary = matrix.summary_frame()
    assert set(summary["source"]) == {EXPERT, "Stay"}

    lonely = PolicyRegistry.with_expert(experts)
    with pytest.raises(ValueError):
        crossplay(lonely, env, experts, episodes=1, seeds=[0])
    print(f"✅ 2 x 2 matrix, expert cell {matrix.cells[(EXPERT, EXPERT)].team_metric.mean:.3f}")


def test_best_response_matches_brute_force():
    """Exact DP equals the best of all open-loop opponent sequences"""
    print_header("TEST 8: Best Response")

    env, experts = workbench("physical_deception", grid_size=3, horizon=3)
    adversary = env.teams["adversary"][0]
    for seed in range(3):
        start = env.reset(seed)
        value, policy = best_response(env, list(experts.policies), "defenders", start)

        best = -math.inf
        for sequence in product(range(env.action_count(adversary)), repeat=env.horizon):
            state, outcomes = start, []
            for action in sequence:
                joint = [experts.policies[i].act(env, state, i) for i in range(env.n_agents)]
                joint[adversary] = action
                outcome = env.step(state, joint)
                outcomes.append(outcome)
                state = outcome.next_state
            total = 0.0
            for outcome in reversed(outcomes):
                total = outcome.rewards[adversary] + env.discount * total
            best = max(best, total)
        assert value == pytest.approx(best, abs=1e-9)

        # the returned policy attains the value
        policies = experts.mixed({adversary: policy})
        trace = run_episode(env, policies, 0, start=start)
        solver = BestResponseSolver(env, policies, "defenders")
        assert solver.incumbent_value(trace) == pytest.approx(value, abs=1e-9)
    print("✅ DP value equals brute force over 125 sequences")


def test_exploitability_non_negative():
    """Best responses never do worse than the incumbent"""
    print_header("TEST 9: Exploitability")

    env, experts = workbench("physical_deception", grid_size=3, horizon=3)
    for team in env.teams:
        frozen = {i: experts.policies[i] for i in env.teams[team]}
        value = exploitability(env, frozen, experts, team, episodes=4, seed=0)
        assert value >= 0.0
        details = exploitability_details(env, frozen, experts, team, episodes=4, seed=0)
        assert all(b >= v for b, v in zip(details.best_values, details.incumbent_values))
        assert details.n_states > 0
        print(f"✓ {team}: {value:.4f}")

    with pytest.raises(StateSpaceTooLarge):
        exploitability(env, {0: experts.policies[0], 1: experts.policies[1]}, experts, "defenders",
                       episodes=1, state_limit=1)
    print("✅ Exploitability >= 0; state budget enforced")


def test_feature_report():
    """Per-agent importances average over seeds and sum to 1"""
    print_header("TEST 10: Feature Report")

    env, experts = workbench("physical_deception", horizon=5)
    trials = [imitation_dt_train(experts, env, 60, 3, seed=s).trees for s in (0, 1, 2)]
    frame = feature_report(trials, n_trials=2, agent_labels=env.agent_labels)
    assert list(frame.columns) == ['agent', 'agent_label', 'feature', 'importance']
    for agent, group in frame.groupby("agent"):
        assert group["importance"].sum() == pytest.approx(1.0)
        assert len(group) == env.n_features(agent)
    assert set(frame["agent_label"]) == set(env.agent_labels)
    with pytest.raises(ValueError):
        feature_report([])
    print(f"✅ {len(frame)} rows")


def test_ablation_suite():
    """Four variants by two ratio kinds"""
    print_header("TEST 11: Ablations")

    env, experts = workbench("physical_deception", grid_size=3, horizon=3)
    cfg = ExtractionConfig(n_iterations=1, n_rollouts=2, max_depth=1, eval_episodes_for_selection=2,
                           max_samples=100)
    rows = ablation_suite(env, experts, QOracle(experts), cfg, seeds=[0], episodes=2, team="defenders",
                          config_digest="d")
    assert len(rows) == 8
    frame = ablation_frame(rows)
    assert len(frame) == 8
    assert set(frame["variant"]) == set(ABLATION_VARIANTS)
    assert set(frame["kind"]) == {"individual", "joint"}
    assert (frame["config_digest"] == "d").all()
    print("✅ 8 ablation rows")


def ratio_row(variant, kind, per_seed):
    name = "joint_ratio" if kind == "joint" else "individual_ratio"
    report = EvalReport(config_digest="d", seeds=tuple(range(len(per_seed))))
    report.add(summarize(name, per_seed, 10))
    return AblationRow(variant, kind, report)


def test_ablation_regression_column():
    """MAVIPER rows below an ablation of the same kind are marked as regressions"""
    print_header("TEST 12: Ablation Regressions")

    rows = [
        ratio_row("MAVIPER", "joint", [0.6, 0.7]),
        ratio_row("MAVIPER (No Prediction)", "joint", [0.8, 0.9]),
        ratio_row("MAVIPER (IVIPER Resampling)", "joint", [0.5, 0.5]),
        ratio_row("IVIPER", "joint", [0.95, 0.95]),
        ratio_row("MAVIPER", "individual", [0.9, 0.9]),
        ratio_row("MAVIPER (No Prediction)", "individual", [0.8, 0.8]),
        ratio_row("MAVIPER (IVIPER Resampling)", "individual", [0.9, 0.9]),
        ratio_row("IVIPER", "individual", [1.0, 1.0]),
    ]
    frame = ablation_frame(rows)
    assert frame["regression"].dtype == bool
    flagged = frame[frame["regression"]]
    assert list(zip(flagged["variant"], flagged["kind"])) == [("MAVIPER", "joint")]

    # a tie is not a regression and IVIPER never counts against MAVIPER
    assert not frame[(frame["variant"] == "MAVIPER") & (frame["kind"] == "individual")]["regression"].item()
    assert not frame[frame["variant"] != "MAVIPER"]["regression"].any()
    print("✅ Only the joint MAVIPER row is a regression")


def test_algorithm_comparison():
    """Joint metrics per algorithm and a paired interval on shared seeds"""
    print_header("TEST 13: Algorithm Comparison")

    env = make_env(EnvConfig(env_kind="cooperative_navigation", grid_size=4, horizon=1,
                             n_agents_per_role={'agent': 1}))
    stay = ExpertProfile(env=env, policies=(StayPolicy(),), roles=env.roles, team_partition=dict(env.teams))
    tree = ObservationPolicy(toward_target_tree())
    seeds = (0, 1, 2)
    profiles = {"Toward": {s: {0: tree} for s in seeds}, "Stay": {s: {0: StayPolicy()} for s in seeds}}

    report = algorithm_comparison(env, stay, "agents", profiles, episodes=20, pair=("Toward", "Stay"),
                                  config_digest="d")
    assert set(report.metrics) == {"joint_metric[Toward]", "joint_metric[Stay]",
                                   "paired_difference[Toward-Stay]"}
    difference = report["paired_difference[Toward-Stay]"]
    assert difference.n_seeds == 3
    assert difference.n_episodes == 20
    assert difference.mean == pytest.approx(report["joint_metric[Toward]"].mean - report["joint_metric[Stay]"].mean)
    # coverage distance: lower is better
    assert difference.mean < 0
    assert not report.flags

    frame = report.to_frame(team="agents")
    aggregate = frame[frame["seed"] == "all"]
    assert len(aggregate) == 3
    assert {"mean", "sd", "ci95", "n_seeds", "config_digest"} <= set(frame.columns)

    backwards = algorithm_comparison(env, stay, "agents", {"Stay": profiles["Stay"], "Toward": profiles["Toward"]},
                                     episodes=20, pair=("Stay", "Toward"))
    assert set(backwards.flags) == {"ranking", "paired_ci"}

    with pytest.raises(ValueError):
        algorithm_comparison(env, stay, "agents", {"Toward": profiles["Toward"], "Stay": {0: {0: StayPolicy()}}},
                             episodes=2, pair=("Toward", "Stay"))
    print(f"✅ Toward - Stay {difference.mean:.3f} ± {difference.ci_half_width:.3f}")


def main():
    """Run all tests"""
    print("\n" + "🚀" * 30)
    print("  TREE DISTILLER - EVALUATION TESTS")
    print("🚀" * 30)

    tests = [
        ("Ratio Arithmetic", test_ratio_arithmetic),
        ("Identity Ratios", test_identity_ratios),
        ("Ratio Above One", test_superior_policy_ratio),
        ("Reward Metric", test_reward_metric),
        ("Summaries", test_summaries),
        ("Report Rows", test_report_rows),
        ("Cross-play", test_crossplay_matrix),
        ("Best Response", test_best_response_matches_brute_force),
        ("Exploitability", test_exploitability_non_negative),
        ("Feature Report", test_feature_report),
        ("Ablations", test_ablation_suite),
        ("Ablation Regressions", test_ablation_regression_column),
        ("Algorithm Comparison", test_algorithm_comparison),
    ]

    results = []
    for test_name, test_func in tests:
        try:
            test_func()
            results.append((test_name, True))
        except Exception as e:
            print(f"\n❌ Test '{test_name}' failed: {e!r}")
            import traceback
            traceback.print_exc()
            results.append((test_name, False))

    print_header("TEST SUMMARY")
    passed = sum(1 for _, result in results if result)
    for test_name, result in results:
        status = "✅ PASS" if result else "❌ FAIL"
        print(f"{status} - {test_name}")
    print("\n" + "-" * 60)
    print(f"Results: {passed}/{len(results)} tests passed")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
