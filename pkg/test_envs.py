"""
Tests for the grid-world environments
Run directly or through pytest
"""
import io
import json
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from envs import (
    COLLISION,
    PREDATOR_TOUCH,
    TARGET_COVERED,
    EnvConfig,
    JointState,
    export_trace,
    make_env,
    run_episode,
    trace_records
)
from experts import StayPolicy, build_expert_profile
from utils.errors import ConfigError, EpisodeOver, IncompleteTrace


def print_header(title):
    """Print section header"""
    print("\n" + "=" * 60)
    print(f"  {title}")
    print("=" * 60)


def pd_env(**kwargs):
    return make_env(EnvConfig(env_kind="physical_deception", **kwargs))


def cn_env(n_agents=3, **kwargs):
    return make_env(EnvConfig(env_kind="cooperative_navigation", n_agents_per_role={'agent': n_agents}, **kwargs))


def pp_env(**kwargs):
    return make_env(EnvConfig(env_kind="predator_prey", **kwargs))


def test_reset_is_deterministic():
    """Same config and episode seed give the same initial state"""
    print_header("TEST 1: Deterministic Reset")

    for env in (pd_env(), cn_env(), pp_env()):
        first = env.reset(12345)
        again = env.reset(12345)
        assert first == again
        assert first.digest() == again.digest()
        assert first.timestep == 0
        print(f"✓ {type(env).__name__}: {first.digest()[:12]}")

    other_seed = make_env(EnvConfig(env_kind="physical_deception", seed=1)).reset(12345)
    assert other_seed != pd_env().reset(12345)
    print("✅ Reset depends only on (config seed, episode seed)")


def test_placement():
    """Entities never share a cell at reset; PP landmarks are interior"""
    print_header("TEST 2: Placement")

    pd = pd_env()
    cn = cn_env()
    pp = pp_env()
    for seed in range(50):
        s = pd.reset(seed)
        assert len(set(s.agents + s.landmarks)) == 5
        assert 0 <= s.true_target < 2
        s = cn.reset(seed)
        assert len(set(s.agents + s.landmarks)) == 6
        s = pp.reset(seed)
        assert len(set(s.agents)) == 4
        assert not set(s.agents) & set(s.landmarks)
        assert all(1 <= r <= 3 and 1 <= c <= 3 for r, c in s.landmarks)
        assert s.velocities == ((0, 0),) * 4
    print("✅ 50 resets per environment placed distinct entities")


def test_capacity_errors():
    """Configs that cannot fit their entities are rejected"""
    print_header("TEST 3: Capacity")

    with pytest.raises(ConfigError):
        cn_env(n_agents=5, grid_size=3)
    with pytest.raises(ConfigError):
        make_env(EnvConfig(env_kind="predator_prey", grid_size=3,
                           n_agents_per_role={'predator': 4, 'prey': 4}))
    with pytest.raises(ValueError):
        EnvConfig(env_kind="physical_deception", n_agents_per_role={'adversary': 2})
    print("✅ Over-full grids raise ConfigError")


def test_step_and_clamping():
    """Moves off the grid become no-ops and the timestep advances"""
    print_header("TEST 4: Step And Clamping")

    env = pd_env()
    state = JointState(agents=((0, 0), (2, 2), (4, 4)), landmarks=((1, 1), (3, 3)), true_target=0)
    outcome = env.step(state, [1, 4, 2])
    assert outcome.next_state.agents == ((0, 0), (2, 3), (4, 4))
    assert outcome.next_state.timestep == 1
    assert outcome.actions == (1, 4, 2)
    assert not env.is_legal(state, 0, 1)
    assert env.is_legal(state, 0, 0)
    print("✓ Blocked moves stay in place")

    with pytest.raises(ValueError):
        env.step(state, [0, 0])
    with pytest.raises(ValueError):
        env.step(state, [0, 0, 7])

    last = JointState(agents=state.agents, landmarks=state.landmarks, timestep=env.horizon, true_target=0)
    with pytest.raises(EpisodeOver):
        env.step(last, [0, 0, 0])
    print("✅ Invalid joint actions and steps past the horizon are rejected")


def test_physical_deception_success():
    """Covering both targets in one step is a defender success"""
    print_header("TEST 5: Physical Deception Events")

    env = pd_env(horizon=1)
    state = JointState(agents=((0, 0), (2, 2), (4, 4)), landmarks=((0, 1), (2, 3)), true_target=0)
    outcome = env.step(state, [4, 4, 0])
    assert len(outcome.events_of(TARGET_COVERED)) == 2
    assert outcome.rewards == (8.0, 8.0, -7.0)
    trace = [outcome]
    assert env.team_metric(trace, "defenders") == 1.0
    assert env.team_metric(trace, "adversary") == 0.0
    print("✅ Defenders covered both targets, adversary stayed 7 cells away")


def test_cooperative_navigation_collision():
    """Agents ending on the same cell collide and share the penalty"""
    print_header("TEST 6: Cooperative Navigation Collision")

    env = cn_env(n_agents=2, horizon=1)
    state = JointState(agents=((0, 0), (0, 2)), landmarks=((4, 4), (4, 0)))
    outcome = env.step(state, [4, 3])
    assert outcome.next_state.agents == ((0, 1), (0, 1))
    assert outcome.events_of(COLLISION)[0].first == 0
    assert outcome.events_of(COLLISION)[0].second == 1
    assert outcome.rewards == (-13.0, -13.0)
    assert env.team_metric([outcome], "agents") == 12.0
    assert env.metric_lower_is_better("agents")
    assert env.team_score([outcome], "agents") == -12.0
    print("✅ Collision counted once, coverage distance 12")


def test_predator_prey_touch():
    """Touches reward predators, penalize the touched prey and track velocities"""
    print_header("TEST 7: Predator-Prey Touch")

    env = pp_env(horizon=1)
    state = JointState(agents=((0, 0), (4, 4), (0, 2), (4, 2)), landmarks=((2, 2), (3, 1)),
                       velocities=((0, 0),) * 4)
    outcome = env.step(state, [4, 0, 3, 0])
    touch = outcome.events_of(PREDATOR_TOUCH)
    assert [(e.first, e.second) for e in touch] == [(0, 2)]
    assert outcome.rewards == (10.0, 10.0, -10.0, 0.0)
    assert outcome.next_state.velocities[2] == (0, -1)
    assert env.team_metric([outcome], "predators") == 1.0
    assert env.team_score([outcome], "prey") == -1.0

    # landmarks block movement
    blocked = JointState(agents=((1, 2), (4, 4), (0, 4), (4, 0)), landmarks=((2, 2), (3, 1)),
                         velocities=((0, 0),) * 4)
    assert env.step(blocked, [2, 0, 0, 0]).next_state.agents[0] == (1, 2)
    print("✅ One touch, prey velocity (0, -1), landmark blocked the move")


def test_observation_lengths():
    """Observation vectors match their feature names"""
    print_header("TEST 8: Observations")

    pd, cn, pp = pd_env(), cn_env(), pp_env()
    expected = [(pd, [10, 10, 8]), (cn, [10, 10, 10]), (pp, [22, 22, 20, 20])]
    for env, lengths in expected:
        state = env.reset(3)
        for agent, length in enumerate(lengths):
            obs = env.observe(state, agent)
            assert len(obs) == length
            assert len(obs.feature_names) == length
            assert env.n_features(agent) == length
        print(f"✓ {type(env).__name__}: {lengths}")

    assert "true_target_drow" in pd.feature_names(0)
    assert "true_target_drow" not in pd.feature_names(2)
    with pytest.raises(ValueError):
        pd.observe(pd.reset(0), 3)
    print("✅ Only defenders observe the true target")


def test_binarization():
    """PP keeps own position and velocity raw and sign-binarizes the rest"""
    print_header("TEST 9: Binarization")

    env = pp_env()
    for seed in range(10):
        state = env.reset(seed)
        for agent in range(env.n_agents):
            obs = env.observe(state, agent)
            assert not obs.binarized[:4].any()
            assert obs.binarized[4:].all()
            assert set(np.unique(obs.features[obs.binarized])) <= {-1.0, 0.0, 1.0}
    assert not cn_env().observe(cn_env().reset(0), 0).binarized.any()
    print("✅ Binarized features lie in {-1, 0, 1}")


def test_actions():
    """Prey move up to two cells, everyone else one"""
    print_header("TEST 10: Action Spaces")

    env = pp_env()
    assert [env.action_count(i) for i in range(4)] == [5, 5, 9, 9]
    assert env.action_names(2)[5] == "up2"
    assert pd_env().action_count(2) == 5
    print("✅ Action counts 5/5/9/9")


def test_metrics_need_complete_traces():
    """Team metrics are only defined on full episodes"""
    print_header("TEST 11: Trace Completeness")

    env = cn_env(horizon=4)
    policies = [StayPolicy()] * env.n_agents
    trace = run_episode(env, policies, 9)
    assert len(trace) == 4
    assert env.team_metric(trace, "agents") >= 0
    with pytest.raises(IncompleteTrace):
        env.team_metric(trace[:2], "agents")
    with pytest.raises(ValueError):
        env.team_metric(trace, "prey")
    print("✅ Partial traces raise IncompleteTrace")


def test_team_return():
    """Discounted team return accumulates back to front"""
    print_header("TEST 12: Team Return")

    env = pd_env(horizon=3)
    trace = run_episode(env, list(build_expert_profile(env).policies), 4)
    rewards = [out.rewards[0] for out in trace]
    expected = rewards[0] + env.discount * (rewards[1] + env.discount * rewards[2])
    assert env.team_return(trace, "defenders") == pytest.approx(expected)
    print(f"✅ Defender return {expected:.4f}")


def test_trace_export():
    """Traces export as one JSON line per step"""
    print_header("TEST 13: Trace Export")

    env = pp_env(horizon=5)
    trace = run_episode(env, list(build_expert_profile(env).policies), 2)
    stream = io.StringIO()
    assert export_trace(trace, stream) == 5
    lines = stream.getvalue().splitlines()
    records = [json.loads(line) for line in lines]
    assert [r['timestep'] for r in records] == [1, 2, 3, 4, 5]
    assert records == trace_records(trace)
    assert len(records[0]['actions']) == 4
    print("✅ 5 JSON lines written")


def main():
    """Run all tests"""
    print("\n" + "🚀" * 30)
    print("  TREE DISTILLER - ENVIRONMENT TESTS")
    print("🚀" * 30)

    tests = [
        ("Deterministic Reset", test_reset_is_deterministic),
        ("Placement", test_placement),
        ("Capacity", test_capacity_errors),
        ("Step And Clamping", test_step_and_clamping),
        ("Physical Deception Events", test_physical_deception_success),
        ("Cooperative Navigation Collision", test_cooperative_navigation_collision),
        ("Predator-Prey Touch", test_predator_prey_touch),
        ("Observations", test_observation_lengths),
        ("Binarization", test_binarization),
        ("Action Spaces", test_actions),
        ("Trace Completeness", test_metrics_need_complete_traces),
        ("Team Return", test_team_return),
        ("Trace Export", test_trace_export),
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
