"""
Expert policy profiles
"""
from dataclasses import dataclass
from typing import Dict, List, Mapping, Tuple

from envs.config import EnvKind
from envs.gridworld import GridWorld
from envs.state import JointState
from .policies import AssignmentExpert, EvasiveExpert, NearestTargetExpert, Policy, joint_action


@dataclass(frozen=True)
class ExpertProfile:
    """One scripted policy per agent, with role tags and the team partition"""
    env: GridWorld
    policies: Tuple[Policy, ...]
    roles: Tuple[str, ...]
    team_partition: Dict[str, Tuple[int, ...]]

    def __post_init__(self):
        if len(self.policies) != self.env.n_agents:
            raise ValueError(f"profile needs {self.env.n_agents} policies, got {len(self.policies)}")
        members = sorted(i for team in self.team_partition.values() for i in team)
        if members != list(range(self.env.n_agents)):
            raise ValueError(f"team partition {self.team_partition} does not partition the agents")

    def act(self, state: JointState, agent: int) -> int:
        return int(self.policies[agent].act(self.env, state, agent))

    def joint_action(self, state: JointState) -> Tuple[int, ...]:
        return joint_action(self.env, state, self.policies)

    def mixed(self, replacements: Mapping[int, Policy]) -> List[Policy]:
        """Per-agent policies with some agents swapped out"""
        return [replacements.get(i, p) for i, p in enumerate(self.policies)]


def build_expert_profile(env: GridWorld) -> ExpertProfile:
    """
    Default scripted experts for an environment

    Args:
        env: Grid world

    Returns:
        ExpertProfile covering every agent
    """
    policies: List[Policy] = []
    if env.kind == EnvKind.PHYSICAL_DECEPTION:
        defenders = AssignmentExpert(env.teams["defenders"])
        policies = [defenders] * len(env.teams["defenders"]) + [NearestTargetExpert()]
    elif env.kind == EnvKind.COOPERATIVE_NAVIGATION:
        policies = [AssignmentExpert(env.teams["agents"])] * env.n_agents
    else:
        chase = AssignmentExpert(env.teams["predators"], goal_team="prey")
        evade = EvasiveExpert("predators")
        policies = [chase if role == "predator" else evade for role in env.roles]
    return ExpertProfile(env=env, policies=tuple(policies), roles=env.roles,
                         team_partition=dict(env.teams))


def expert_act(profile: ExpertProfile, state: JointState, agent: int) -> int:
    """Expert action for one agent"""
    return profile.act(state, agent)
