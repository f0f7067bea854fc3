"""
Error types raised by the simulation core
"""
from typing import Optional


class AbhLabError(Exception):
    """Base class for all simulation errors"""


class DomainError(AbhLabError, ValueError):
    """A station, window or grid lies outside the beam or is malformed"""


class ConfigError(AbhLabError, ValueError):
    """Invalid configuration; `key` names the offending entry when known"""

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


class AssemblyError(AbhLabError, RuntimeError):
    """Section properties could not be integrated"""


class ResonanceError(AbhLabError, RuntimeError):
    """Dynamic stiffness is singular at the requested frequency"""

    def __init__(self, omega: float, message: str = "dynamic stiffness is singular"):
        self.omega = omega
        super().__init__(f"{message} at omega={omega:.6g} rad/s")


class SolverError(AbhLabError, RuntimeError):
    """Linear or eigenvalue solve failed"""


class UndefinedMetricError(AbhLabError, ValueError):
    """CF requested for an envelope that is identically zero"""


class OutputError(AbhLabError, OSError):
    """An artifact could not be written; `path` names the file"""

    def __init__(self, path, message: str):
        self.path = str(path)
        super().__init__(f"{self.path}: {message}")
