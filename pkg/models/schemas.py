"""
Pydantic models for configuration, sweep results and run manifests
"""
from enum import Enum
from typing import Optional, List, Tuple, Dict
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import (
    DEFAULT_BASIS_SIZE,
    MIN_BASIS_SIZE,
    DEFAULT_WINDOW,
    DEFAULT_STATIONS,
    DEFAULT_PERIODS,
    DEFAULT_SAMPLES_PER_PERIOD,
    DEFAULT_ZERO_PAD,
    DEFAULT_FREQUENCY_HZ,
    DEFAULT_FREQUENCY_AXIS,
    DEFAULT_BANDS,
    MIN_STATIONS,
    MIN_SAMPLES_PER_PERIOD,
    NEAR_FIELD_DECAYS,
    SWEEP_BOUNDS,
)


class BeamConfig(BaseModel):
    """Physical description of the tapered beam, damping layer and load (SI units)"""
    model_config = ConfigDict(frozen=True)

    L: float = Field(default=1.22, gt=0, description="Total length (m)")
    L1: float = Field(default=1.0, gt=0, description="Uniform-section length (m)")
    L2: float = Field(default=1.138, gt=0, description="VEM start coordinate (m)")
    L3: float = Field(default=0.025, ge=0, description="Force location (m)")
    B: float = Field(default=0.0127, gt=0, description="Width (m)")
    h1: float = Field(default=0.003, gt=0, description="Uniform thickness (m)")
    h2: float = Field(default=0.0002, gt=0, description="Minimum ABH thickness (m)")
    h3: float = Field(default=0.0019, ge=0, description="VEM thickness (m)")
    m: float = Field(default=3.0, ge=1, description="Power-law exponent")
    E_b: float = Field(default=68.9e9, gt=0, description="Base Young's modulus (Pa)")
    rho_b: float = Field(default=2700.0, gt=0, description="Base density (kg/m^3)")
    E_vs: float = Field(default=96.16e6, gt=0, description="VEM storage modulus (Pa)")
    eta: float = Field(default=0.34, ge=0, description="VEM loss factor")
    rho_v: float = Field(default=1041.2, gt=0, description="VEM density (kg/m^3)")
    F0: float = Field(default=1.0, description="Force amplitude (N)")

    @model_validator(mode="after")
    def check_layout(self):
        if not 0 < self.L1 < self.L2 < self.L:
            raise ValueError("stations must satisfy 0 < L1 < L2 < L")
        if not 0 <= self.L3 < self.L1:
            raise ValueError("force location L3 must lie on the uniform section [0, L1)")
        if self.h1 < self.h2:
            raise ValueError("uniform thickness h1 must not be below the tip thickness h2")
        return self

    @property
    def taper_length(self) -> float:
        return self.L - self.L1

    @property
    def vem_length(self) -> float:
        return self.L - self.L2


class SolverSettings(BaseModel):
    """Discretization settings"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(default=DEFAULT_BASIS_SIZE, ge=MIN_BASIS_SIZE, description="Basis size")
    quad_order: int = Field(default=0, ge=0, description="Gauss nodes per segment (0 = automatic)")


class AnalysisSettings(BaseModel):
    """Window and sampling used to reconstruct and analyse the wavefield"""
    model_config = ConfigDict(frozen=True)

    x_lo: float = Field(default=DEFAULT_WINDOW[0], ge=0, description="Window start (m)")
    x_hi: float = Field(default=DEFAULT_WINDOW[1], gt=0, description="Window end (m)")
    nx: int = Field(default=DEFAULT_STATIONS, ge=MIN_STATIONS, description="Stations in the window")
    periods: int = Field(default=DEFAULT_PERIODS, ge=1, description="Reconstructed periods")
    nt_per_period: int = Field(
        default=DEFAULT_SAMPLES_PER_PERIOD,
        ge=MIN_SAMPLES_PER_PERIOD,
        description="Time samples per period"
    )
    zero_pad: int = Field(default=DEFAULT_ZERO_PAD, ge=1, le=16, description="Spatial zero-padding factor")
    freq_hz: float = Field(default=DEFAULT_FREQUENCY_HZ, gt=0, description="Excitation frequency (Hz)")
    near_field_decay: float = Field(
        default=NEAR_FIELD_DECAYS,
        ge=0,
        description="Decay lengths of the force near field excluded from CF (0 = none)"
    )

    @model_validator(mode="after")
    def check_window(self):
        if self.x_hi <= self.x_lo:
            raise ValueError("analysis window must satisfy x_lo < x_hi")
        return self


class SweepSettings(BaseModel):
    """Default sweep axes and trend bands"""
    model_config = ConfigDict(frozen=True)

    axis1: str = Field(default=DEFAULT_FREQUENCY_AXIS, description="First axis spec")
    axis2: str = Field(default="", description="Second axis spec (empty = single axis)")
    bands: str = Field(default=DEFAULT_BANDS, description="Frequency bands lo:hi,lo:hi")


class SimulationSettings(BaseModel):
    """Everything a configuration file describes"""
    model_config = ConfigDict(frozen=True)

    beam: BeamConfig = Field(default_factory=BeamConfig)
    solver: SolverSettings = Field(default_factory=SolverSettings)
    analysis: AnalysisSettings = Field(default_factory=AnalysisSettings)
    sweep: SweepSettings = Field(default_factory=SweepSettings)


class SweepParameter(str, Enum):
    """Quantities a sweep axis can vary"""
    FREQUENCY_HZ = "frequency_hz"
    ETA = "eta"
    POWER_M = "power_m"
    TAPER_FRACTION = "taper_fraction"


class SweepAxis(BaseModel):
    """One labelled axis of a parametric sweep"""
    model_config = ConfigDict(frozen=True)

    name: SweepParameter = Field(..., description="Swept quantity")
    values: Tuple[float, ...] = Field(..., min_length=1, description="Strictly increasing values")

    @field_validator("values")
    @classmethod
    def check_increasing(cls, v):
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("axis values must be strictly increasing")
        return v

    @model_validator(mode="after")
    def check_bounds(self):
        if self.name == SweepParameter.FREQUENCY_HZ:
            if self.values[0] <= 0:
                raise ValueError("frequencies must be positive")
            return self
        lo, hi = SWEEP_BOUNDS[self.name.value]
        open_interval = self.name == SweepParameter.TAPER_FRACTION
        for value in self.values:
            inside = lo < value < hi if open_interval else lo <= value <= hi
            if not inside:
                raise ValueError(f"{self.name.value}={value} outside [{lo}, {hi}]")
        return self


class SweepFailure(BaseModel):
    """A grid point that could not be evaluated"""
    index: Tuple[int, int] = Field(..., description="(axis1, axis2) grid index")
    axis1_value: float
    axis2_value: float
    status: str = Field(..., description="Error tag: config, assembly, resonance, solver or metric")
    error: str = Field(default="", description="Error message")


class SweepResult(BaseModel):
    """CF values on a labelled parameter grid"""
    axis1: SweepAxis
    axis2: SweepAxis
    cf: List[List[Optional[float]]] = Field(..., description="CF matrix, |axis1| x |axis2|; None where failed")
    failed: List[SweepFailure] = Field(default=[], description="Failed grid points")
    vem_coverage: Optional[List[float]] = Field(
        default=None,
        description="VEM coverage of the taper per taper_fraction value"
    )
    total_time_ms: float = Field(default=0, description="Wall-clock time")

    @model_validator(mode="after")
    def check_shape(self):
        if len(self.cf) != len(self.axis1.values):
            raise ValueError("cf rows must match axis1")
        if any(len(row) != len(self.axis2.values) for row in self.cf):
            raise ValueError("cf columns must match axis2")
        for row in self.cf:
            for value in row:
                if value is not None and not 0.0 <= value <= 1.0:
                    raise ValueError(f"CF value {value} outside [0, 1]")
        return self

    def status(self, i: int, j: int) -> str:
        for failure in self.failed:
            if failure.index == (i, j):
                return failure.status
        return "ok"


class BandSummary(BaseModel):
    """Band-averaged CF for each value of the non-frequency parameter"""
    band: Tuple[float, float] = Field(..., description="Frequency band (Hz)")
    parameter_values: List[float]
    averages: List[Optional[float]]
    argmin_value: Optional[float] = Field(default=None, description="Parameter value with lowest average CF")


class TrendReport(BaseModel):
    """Trend summary of a sweep"""
    axis1: SweepParameter
    axis2: SweepParameter
    row_minima: List[Optional[float]]
    column_minima: List[Optional[float]]
    global_argmin: Optional[Tuple[int, int]] = None
    bands: List[BandSummary] = Field(default=[])
    vem_coverage: Optional[Dict[str, float]] = Field(
        default=None,
        description="taper_fraction -> VEM coverage fraction"
    )


class ModalResult(BaseModel):
    """One flexible mode"""
    mode_index: int = Field(..., ge=1)
    frequency_hz: float = Field(..., ge=0)
    modal_loss_factor: float


class Subcommand(str, Enum):
    """CLI subcommands"""
    MODES = "modes"
    RESPOND = "respond"
    CF_SWEEP = "cf-sweep"
    SPECTRUM = "spectrum"
    FRF = "frf"
    VALIDATE_CONFIG = "validate-config"


class RunManifest(BaseModel):
    """What was run, from which configuration, into which directory"""
    config_path: str
    subcommand: Subcommand
    output_dir: str
    overrides: Dict[str, str] = Field(default={})
    status: str = Field(default="ok")
