"""
Data models and schemas
"""
from .schemas import (
    BeamConfig,
    SolverSettings,
    AnalysisSettings,
    SweepSettings,
    SimulationSettings,
    SweepParameter,
    SweepAxis,
    SweepFailure,
    SweepResult,
    BandSummary,
    TrendReport,
    ModalResult,
    Subcommand,
    RunManifest,
)

__all__ = [
    "BeamConfig",
    "SolverSettings",
    "AnalysisSettings",
    "SweepSettings",
    "SimulationSettings",
    "SweepParameter",
    "SweepAxis",
    "SweepFailure",
    "SweepResult",
    "BandSummary",
    "TrendReport",
    "ModalResult",
    "Subcommand",
    "RunManifest",
]
