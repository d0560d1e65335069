"""
Environment configuration model
"""
from enum import Enum
from typing import Dict

from pydantic import BaseModel, ConfigDict, Field, model_validator

from utils.config import DEFAULT_DISCOUNT, DEFAULT_GRID_SIZE, DEFAULT_HORIZON, DEFAULT_ROLES


class EnvKind(str, Enum):
    """The three supported grid worlds"""
    PHYSICAL_DECEPTION = "physical_deception"
    COOPERATIVE_NAVIGATION = "cooperative_navigation"
    PREDATOR_PREY = "predator_prey"


class EnvConfig(BaseModel):
    """Static description of one grid world instance"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    env_kind: EnvKind = EnvKind.PHYSICAL_DECEPTION
    grid_size: int = Field(DEFAULT_GRID_SIZE, ge=3)
    horizon: int = Field(DEFAULT_HORIZON, ge=1)
    n_agents_per_role: Dict[str, int] = Field(default_factory=dict)
    seed: int = Field(0, ge=0, lt=2 ** 64)
    epsilon_cells: int = Field(0, ge=0)
    discount: float = Field(DEFAULT_DISCOUNT, gt=0.0, le=1.0)

    @model_validator(mode="before")
    @classmethod
    def _fill_roles(cls, data):
        if not isinstance(data, dict):
            return data
        kind = EnvKind(data.get("env_kind", EnvKind.PHYSICAL_DECEPTION))
        defaults = DEFAULT_ROLES[kind.value]
        given = dict(data.get("n_agents_per_role") or {})
        unknown = sorted(set(given) - set(defaults))
        if unknown:
            raise ValueError(f"unknown roles for {kind.value}: {unknown}; expected {sorted(defaults)}")
        data = dict(data)
        data["n_agents_per_role"] = {role: given.get(role, count) for role, count in defaults.items()}
        return data

    @model_validator(mode="after")
    def _check_roles(self):
        for role, count in self.n_agents_per_role.items():
            if count < 1:
                raise ValueError(f"role '{role}' needs at least one agent, got {count}")
        if self.env_kind == EnvKind.PHYSICAL_DECEPTION and self.n_agents_per_role["adversary"] != 1:
            raise ValueError("physical_deception has exactly one adversary")
        return self

    @property
    def n_agents(self) -> int:
        return sum(self.n_agents_per_role.values())
