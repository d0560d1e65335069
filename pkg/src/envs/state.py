"""
Value types shared by every grid world: joint states, observations, events and step outcomes
"""
import hashlib
import json
from dataclasses import dataclass, field
from typing import FrozenSet, List, Tuple

import numpy as np

Position = Tuple[int, int]

TARGET_COVERED = "TargetCovered"
ADVERSARY_REACHED_TRUE = "AdversaryReachedTrue"
COLLISION = "Collision"
PREDATOR_TOUCH = "PredatorTouch"


@dataclass(frozen=True)
class JointState:
    """Full environment configuration at one timestep"""
    agents: Tuple[Position, ...]
    landmarks: Tuple[Position, ...]
    timestep: int = 0
    true_target: int = -1
    velocities: Tuple[Position, ...] = ()

    def canonical(self) -> str:
        """Canonical text form used for digests and trace export"""
        return json.dumps(
            [self.agents, self.landmarks, self.timestep, self.true_target, self.velocities],
            separators=(",", ":"),
        )

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()

    def digest_words(self) -> List[int]:
        """Digest split into four 64-bit words, for seeding"""
        d = self.digest()
        return [int(d[k:k + 16], 16) for k in range(0, 64, 16)]


@dataclass(frozen=True, order=True)
class Event:
    kind: str
    first: int = -1
    second: int = -1

    def __str__(self) -> str:
        args = [str(a) for a in (self.first, self.second) if a >= 0]
        return f"{self.kind}({','.join(args)})"


@dataclass(frozen=True)
class StepOutcome:
    next_state: JointState
    rewards: Tuple[float, ...]
    events: FrozenSet[Event]
    actions: Tuple[int, ...] = ()

    def events_of(self, kind: str) -> List[Event]:
        return sorted(e for e in self.events if e.kind == kind)


@dataclass(eq=False)
class Observation:
    """One agent's feature vector with parallel labels"""
    features: np.ndarray
    feature_names: Tuple[str, ...]
    binarized: np.ndarray = field(default=None)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        if self.binarized is None:
            self.binarized = np.zeros(len(self.features), dtype=bool)
        if len(self.feature_names) != len(self.features):
            raise ValueError("feature_names must be parallel to features")

    def __len__(self) -> int:
        return len(self.features)
