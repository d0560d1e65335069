"""
Run configuration files: TOML sections, --set overrides, presets and digests
"""
import hashlib
import json
import re
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Tuple

import toml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from envs.config import EnvConfig
from experts.oracle import OracleConfig
from extraction.config import BaselineConfig, ExtractionConfig
from utils.config import DESK_SCALE_PRESET, PUBLISHED_HYPERPARAMETERS
from utils.errors import ConfigError

ALGORITHMS = ("viper", "iviper", "maviper", "imitation_dt", "fitted_q")
SECTIONS = ("run", "env", "extraction", "oracle", "baselines", "eval")


class RunSection(BaseModel):
    """What to train and on which seeds"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    algorithm: Literal["viper", "iviper", "maviper", "imitation_dt", "fitted_q"] = "maviper"
    seeds: Tuple[int, ...] = (0,)
    preset: Literal["desk", "published"] = "desk"


class EvalConfig(BaseModel):
    """Evaluation protocol knobs"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    episodes: int = Field(100, ge=1)
    kind: Literal["individual", "joint", "both"] = "both"
    metric: Literal["primary", "reward"] = "primary"
    team: Optional[str] = None
    state_limit: int = Field(200000, ge=1)
    exploit_episodes: int = Field(10, ge=1)
    n_trials: Optional[int] = Field(None, ge=1)


class RunConfig(BaseModel):
    """Fully resolved run configuration"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    run: RunSection = RunSection()
    env: EnvConfig = EnvConfig()
    extraction: ExtractionConfig = ExtractionConfig()
    oracle: OracleConfig = OracleConfig()
    baselines: BaselineConfig = BaselineConfig()
    eval: EvalConfig = EvalConfig()

    def extraction_for_seed(self, seed: int) -> ExtractionConfig:
        return self.extraction.model_copy(update={'seed': seed})


# ------------------------------------------------------------------ parsing

def _locate(text: str, section: Optional[str], key: Optional[str]) -> Optional[int]:
    """1-based line of ``key`` inside ``[section]``, or of the section header"""
    if not text or not section:
        return None
    current = None
    header_line = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        header = re.match(r"^\[([^\]]+)\]$", stripped)
        if header:
            current = header.group(1).strip()
            if current == section:
                header_line = lineno
            continue
        if current == section and key and re.match(rf"^{re.escape(key)}\s*=", stripped):
            return lineno
    return header_line


def parse_override(item: str) -> Tuple[str, str, object]:
    """
    Parse one ``section.key=value`` override

    The value is read as a TOML literal and falls back to a plain string.

    Returns:
        (section, key, value)
    """
    if "=" not in item:
        raise ConfigError(f"override '{item}' is not of the form section.key=value", key=item)
    dotted, raw = item.split("=", 1)
    dotted = dotted.strip()
    if dotted.count(".") != 1:
        raise ConfigError(f"override key '{dotted}' must be section.key", key=dotted)
    section, key = dotted.split(".")
    if section not in SECTIONS:
        raise ConfigError(f"unknown section '{section}', expected one of {list(SECTIONS)}", key=dotted)
    try:
        value = toml.loads(f"value = {raw.strip()}")["value"]
    except toml.TomlDecodeError:
        value = raw.strip()
    return section, key, value


def apply_overrides(raw: Dict, overrides: Sequence[str]) -> Dict:
    merged = {section: dict(values) for section, values in raw.items()}
    for item in overrides:
        section, key, value = parse_override(item)
        merged.setdefault(section, {})[key] = value
    return merged


def _apply_preset(raw: Dict) -> Dict:
    run = raw.get("run", {})
    preset = run.get("preset", "desk")
    algorithm = run.get("algorithm", "maviper")
    env_kind = raw.get("env", {}).get("env_kind", "physical_deception")
    extraction = dict(raw.get("extraction", {}))
    baselines = dict(raw.get("baselines", {}))

    if preset == "published":
        table = PUBLISHED_HYPERPARAMETERS
        chosen = table.get("iviper" if algorithm == "viper" else algorithm, {})
        extraction_values = chosen.get(env_kind, {}) if algorithm in ("viper", "iviper", "maviper") else {}
        baseline_values = {**table["imitation_dt"], **table["fitted_q"]}
    else:
        extraction_values = DESK_SCALE_PRESET
        baseline_values = {}

    for key, value in extraction_values.items():
        extraction.setdefault(key, value)
    for key, value in baseline_values.items():
        baselines.setdefault(key, value)

    resolved = dict(raw)
    resolved["extraction"] = extraction
    resolved["baselines"] = baselines
    return resolved


def _error_key(error: Dict) -> Tuple[Optional[str], Optional[str]]:
    loc = [str(part) for part in error.get("loc", ())]
    section = loc[0] if loc else None
    key = loc[1] if len(loc) > 1 else None
    return section, key


def build_run_config(raw: Dict, text: str = "") -> RunConfig:
    """
    Validate a raw section dictionary

    Args:
        raw: Parsed TOML (plus overrides)
        text: Source text, used to report line numbers

    Returns:
        RunConfig
    """
    unknown = [s for s in raw if s not in SECTIONS]
    if unknown:
        raise ConfigError(f"unknown section '{unknown[0]}'", key=unknown[0], line=_locate(text, unknown[0], None))
    try:
        return RunConfig.model_validate(_apply_preset(raw))
    except ValidationError as e:
        error = e.errors()[0]
        section, key = _error_key(error)
        dotted = ".".join(p for p in (section, key) if p)
        raise ConfigError(error["msg"], key=dotted or None, line=_locate(text, section, key))


def load_run_config_text(text: str, overrides: Sequence[str] = ()) -> RunConfig:
    try:
        raw = toml.loads(text)
    except toml.TomlDecodeError as e:
        raise ConfigError(f"invalid TOML: {e.msg}", line=e.lineno)
    return build_run_config(apply_overrides(raw, overrides), text)


def load_run_config(path=None, overrides: Sequence[str] = ()) -> RunConfig:
    """
    Load a run configuration file and apply overrides

    Args:
        path: TOML file, or None for defaults plus overrides
        overrides: ``section.key=value`` strings

    Returns:
        Validated RunConfig
    """
    if path is None:
        return load_run_config_text("", overrides)
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    return load_run_config_text(path.read_text(encoding="utf-8"), overrides)


# ------------------------------------------------------------------ output

def canonical_json(cfg: RunConfig) -> str:
    return json.dumps(cfg.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))


def config_digest(cfg: RunConfig) -> str:
    """SHA-256 of the canonical JSON form of the resolved configuration"""
    return hashlib.sha256(canonical_json(cfg).encode("utf-8")).hexdigest()


def dump_run_config(cfg: RunConfig) -> str:
    """TOML text that loads back to an equal configuration"""
    return toml.dumps(cfg.model_dump(mode="json", exclude_none=True))


def run_seeds(cfg: RunConfig) -> List[int]:
    return list(cfg.run.seeds)
