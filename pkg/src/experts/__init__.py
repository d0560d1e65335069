"""
Scripted experts and exact rollout oracles
"""
from .policies import (
    Policy,
    AssignmentExpert,
    NearestTargetExpert,
    EvasiveExpert,
    StayPolicy,
    ObservationPolicy,
    greedy_action,
    best_assignment,
    joint_action
)
from .profile import ExpertProfile, build_expert_profile, expert_act
from .oracle import QOracle, OracleConfig, AllOthers, OutsideTeam

__all__ = [
    'Policy',
    'AssignmentExpert',
    'NearestTargetExpert',
    'EvasiveExpert',
    'StayPolicy',
    'ObservationPolicy',
    'greedy_action',
    'best_assignment',
    'joint_action',
    'ExpertProfile',
    'build_expert_profile',
    'expert_act',
    'QOracle',
    'OracleConfig',
    'AllOthers',
    'OutsideTeam'
]
