"""
Error types raised across the tree distiller
"""
from typing import Optional


class DistillerError(Exception):
    """Base class for every error the distiller raises on purpose"""


class ConfigError(DistillerError):
    """Invalid run configuration, environment configuration or override"""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        """
        Args:
            message: Human readable description
            key: Offending config key (``section.field``) when known
            line: 1-based line in the config file when known
        """
        self.key = key
        self.line = line
        location = []
        if key:
            location.append(f"key '{key}'")
        if line is not None:
            location.append(f"line {line}")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(f"{message}{suffix}")


class EpisodeOver(DistillerError):
    """A step or value query was made past the episode horizon"""

    def __init__(self, timestep: int, horizon: int):
        self.timestep = timestep
        self.horizon = horizon
        super().__init__(f"episode is over: timestep {timestep} >= horizon {horizon}")


class IncompleteTrace(DistillerError):
    """Team metric requested on a trace that did not reach the horizon"""

    def __init__(self, length: int, horizon: int):
        self.length = length
        self.horizon = horizon
        super().__init__(f"trace has {length} steps, horizon is {horizon}")


class EmptyDataset(DistillerError):
    """Tree training called without any positively weighted sample"""


class DimensionMismatch(DistillerError):
    """Observation length does not match the tree's feature count"""

    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"expected {expected} features, got {got}")


class ParseError(DistillerError):
    """Malformed tree document or DOT text"""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        where = f" at {location}" if location else ""
        super().__init__(f"{message}{where}")


class ZeroBaseline(DistillerError):
    """A performance ratio would divide by zero"""

    def __init__(self, team: str, baseline: float, value: float):
        self.team = team
        self.baseline = baseline
        self.value = value
        super().__init__(f"ratio for team '{team}' has a zero denominator "
                         f"(baseline={baseline}, value={value})")


class StateSpaceTooLarge(DistillerError):
    """Exact best-response search exceeded its state budget"""

    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"best-response search visited {size} states, limit is {limit}")


class ManifestMismatch(DistillerError):
    """An artifact does not match the checksum recorded in its run manifest"""

    def __init__(self, path: str, expected: Optional[str] = None, actual: Optional[str] = None):
        self.path = path
        self.expected = expected
        self.actual = actual
        super().__init__(f"checksum mismatch for {path}: manifest {expected}, file {actual}")
