"""
Parametric CF sweeps with multi-threading support
"""
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import List, Optional, Callable, Dict, Sequence, Tuple
import time
import logging
import re

import numpy as np
from pydantic import ValidationError

from .assembly import SpectralModel, build_model
from .basis import BasisSet
from .exceptions import (
    AbhLabError,
    AssemblyError,
    ConfigError,
    ResonanceError,
    UndefinedMetricError,
)
from .solver import displacement_amplitude, harmonic_response
from .wavefield import cost_function, far_field_stations, near_field_cut, window_grid
from models.schemas import (
    AnalysisSettings,
    BandSummary,
    BeamConfig,
    SolverSettings,
    SweepAxis,
    SweepFailure,
    SweepParameter,
    SweepResult,
    TrendReport,
)
from config import MAX_WORKERS


logger = logging.getLogger(__name__)

_RANGE_PATTERN = re.compile(
    r"^(?P<lo>[^:]+):(?P<hi>[^:]+):(?P<count>\d+)(?P<spacing>log|lin)?$"
)


def parse_axis(spec: str) -> SweepAxis:
    """
    Parse an axis spec

    Accepted forms are ``name=lo:hi:COUNT[log|lin]`` and ``name=v1,v2,...``.

    Args:
        spec: Axis specification, e.g. ``eta=0.001:0.5:50log``

    Returns:
        SweepAxis
    """
    if "=" not in spec:
        raise ConfigError(f"axis spec '{spec}' must look like name=values", key="sweep.axis")
    name, _, body = spec.partition("=")
    name = name.strip()
    body = body.strip()
    try:
        match = _RANGE_PATTERN.match(body)
        if match:
            lo = float(match.group("lo"))
            hi = float(match.group("hi"))
            count = int(match.group("count"))
            if count < 1:
                raise ValueError("count must be at least 1")
            if match.group("spacing") == "log":
                if lo <= 0 or hi <= 0:
                    raise ValueError("log spacing needs positive bounds")
                values = np.geomspace(lo, hi, count) if count > 1 else np.array([lo])
            else:
                values = np.linspace(lo, hi, count) if count > 1 else np.array([lo])
        else:
            values = np.array([float(v) for v in body.split(",") if v.strip()])
        return SweepAxis(name=name, values=tuple(float(v) for v in values))
    except (ValueError, ValidationError) as e:
        raise ConfigError(f"invalid axis spec '{spec}': {e}", key="sweep.axis") from e


def parse_bands(spec: str) -> List[Tuple[float, float]]:
    """Parse ``lo:hi,lo:hi`` frequency bands"""
    bands = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            lo, hi = (float(v) for v in chunk.split(":"))
        except ValueError as e:
            raise ConfigError(f"invalid band '{chunk}'", key="sweep.bands") from e
        if not 0 <= lo < hi:
            raise ConfigError(f"band '{chunk}' must satisfy 0 <= lo < hi", key="sweep.bands")
        bands.append((lo, hi))
    return bands


def derive_config(base: BeamConfig, parameter: SweepParameter, value: float) -> BeamConfig:
    """
    Configuration at one grid value

    taper_fraction sets L1 = L (1 - fraction) with total length and
    VEM tape length (L - L2) held fixed.
    """
    if parameter == SweepParameter.ETA:
        updates = {"eta": value}
    elif parameter == SweepParameter.POWER_M:
        updates = {"m": value}
    elif parameter == SweepParameter.TAPER_FRACTION:
        updates = {"L1": base.L * (1.0 - value), "L2": base.L - base.vem_length}
    else:
        return base
    try:
        return BeamConfig(**{**base.model_dump(), **updates})
    except ValidationError as e:
        raise ConfigError(f"{parameter.value}={value} gives an invalid beam: {e.errors()[0]['msg']}") from e


def vem_coverage(base: BeamConfig, fractions: Sequence[float]) -> List[float]:
    """Fraction of the taper covered by the fixed-length VEM tape"""
    return [base.vem_length / (base.L * f) for f in fractions]


@dataclass(frozen=True)
class PreparedColumn:
    """Assembled model and window stations for one parameter value"""
    cfg: BeamConfig
    basis: BasisSet
    model: SpectralModel
    x_grid: np.ndarray


def _status_tag(error: Exception) -> str:
    if isinstance(error, ConfigError):
        return "config"
    if isinstance(error, AssemblyError):
        return "assembly"
    if isinstance(error, ResonanceError):
        return "resonance"
    if isinstance(error, UndefinedMetricError):
        return "metric"
    return "solver"


class SweepRunner:
    """Evaluates CF on a (frequency x parameter) grid in parallel"""

    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers or MAX_WORKERS

        # Progress tracking
        self._progress_callback: Optional[Callable[[int, int, str], None]] = None

    def set_progress_callback(
        self,
        callback: Callable[[int, int, str], None]
    ) -> None:
        """
        Set a callback for progress updates

        Args:
            callback: Function(current, total, label) called per finished task
        """
        self._progress_callback = callback

    def prepare(
        self,
        base: BeamConfig,
        parameter: Optional[SweepParameter],
        value: float,
        analysis: AnalysisSettings,
        solver: SolverSettings
    ) -> PreparedColumn:
        """Derive the configuration for one parameter value and assemble its model"""
        cfg = base if parameter is None else derive_config(base, parameter, value)
        basis, model = build_model(cfg, solver.n, solver.quad_order or None)
        x = window_grid((analysis.x_lo, analysis.x_hi), analysis.nx, cfg.L)
        return PreparedColumn(cfg=cfg, basis=basis, model=model, x_grid=x)

    def evaluate_frequencies(
        self,
        column: PreparedColumn,
        frequencies: Sequence[float],
        analysis: AnalysisSettings,
        label: str = "base"
    ) -> List[Tuple[Optional[float], Optional[Exception]]]:
        """(cf, error) per frequency on an assembled model, in frequency order"""
        outcomes: List[Tuple[Optional[float], Optional[Exception]]] = []
        for f in frequencies:
            try:
                omega = 2.0 * np.pi * f
                sol = harmonic_response(column.model, omega)
                cut = near_field_cut(column.cfg, omega, analysis.near_field_decay)
                x = column.x_grid[far_field_stations(column.x_grid, cut)]
                cf = cost_function(np.abs(displacement_amplitude(sol, column.basis, x)))
                outcomes.append((cf, None))
            except AbhLabError as e:
                logger.error(f"Error at {label}, f={f:.6g} Hz: {e}")
                outcomes.append((None, e))
        return outcomes

    def evaluate_column(
        self,
        base: BeamConfig,
        parameter: Optional[SweepParameter],
        value: float,
        frequencies: Sequence[float],
        analysis: AnalysisSettings,
        solver: SolverSettings
    ) -> List[Tuple[Optional[float], Optional[Exception]]]:
        """
        CF at every frequency for one parameter value

        One model is assembled and reused for all frequencies.

        Args:
            base: Baseline configuration
            parameter: Swept parameter, or None to evaluate the base as is
            value: Parameter value
            frequencies: Excitation frequencies (Hz)
            analysis: Window settings
            solver: Discretization settings

        Returns:
            (cf, error) per frequency, in frequency order
        """
        label = "base" if parameter is None else f"{parameter.value}={value}"
        try:
            column = self.prepare(base, parameter, value, analysis, solver)
        except AbhLabError as e:
            logger.error(f"Error preparing {label}: {e}")
            return [(None, e)] * len(frequencies)
        return self.evaluate_frequencies(column, frequencies, analysis, label)

    def chunk_count(self, n_frequencies: int, n_values: int) -> int:
        """Frequency chunks per parameter value so every worker gets a task"""
        wanted = -(-self.max_workers // max(n_values, 1))
        return max(1, min(n_frequencies, wanted))

    def run(
        self,
        base: BeamConfig,
        axis1: SweepAxis,
        axis2: SweepAxis,
        analysis: AnalysisSettings,
        solver: SolverSettings
    ) -> SweepResult:
        """
        Run a two-axis sweep; one axis must be frequency_hz

        Each parameter value is assembled once, then its frequencies are
        split into chunks so a single-column sweep still uses every worker.
        Grid points are placed by index, so the result does not depend on
        the worker count or completion order.

        Args:
            base: Baseline configuration
            axis1: First axis (rows of the CF matrix)
            axis2: Second axis (columns)
            analysis: Window settings
            solver: Discretization settings

        Returns:
            SweepResult with per-point failures recorded
        """
        if axis1.name == axis2.name:
            raise ConfigError("sweep axes must name distinct parameters", key="sweep.axis2")
        if SweepParameter.FREQUENCY_HZ not in (axis1.name, axis2.name):
            raise ConfigError("one sweep axis must be frequency_hz", key="sweep.axis1")

        start_time = time.time()
        frequency_first = axis1.name == SweepParameter.FREQUENCY_HZ
        freq_axis, param_axis = (axis1, axis2) if frequency_first else (axis2, axis1)
        freqs = freq_axis.values

        cf = [[None] * len(axis2.values) for _ in axis1.values]
        failed: List[SweepFailure] = []

        def record(j: int, indices: Sequence[int], outcomes) -> None:
            for k, (value, error) in zip(indices, outcomes):
                i1, i2 = (k, j) if frequency_first else (j, k)
                if error is None:
                    cf[i1][i2] = value
                else:
                    failed.append(SweepFailure(
                        index=(i1, i2),
                        axis1_value=axis1.values[i1],
                        axis2_value=axis2.values[i2],
                        status=_status_tag(error),
                        error=str(error)
                    ))

        n_chunks = self.chunk_count(len(freqs), len(param_axis.values))
        chunks = [c.tolist() for c in np.array_split(np.arange(len(freqs)), n_chunks)]

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_index = {
                executor.submit(self.prepare, base, param_axis.name, value, analysis, solver): j
                for j, value in enumerate(param_axis.values)
            }
            columns: Dict[int, PreparedColumn] = {}
            for future in as_completed(future_to_index):
                j = future_to_index[future]
                try:
                    columns[j] = future.result()
                except Exception as e:
                    logger.error(f"Error preparing {param_axis.name.value}={param_axis.values[j]}: {str(e)}")
                    record(j, range(len(freqs)), [(None, e)] * len(freqs))

            future_to_chunk = {
                executor.submit(
                    self.evaluate_frequencies,
                    columns[j],
                    [freqs[k] for k in indices],
                    analysis,
                    f"{param_axis.name.value}={param_axis.values[j]}"
                ): (j, indices)
                for j in sorted(columns)
                for indices in chunks
            }
            total = len(future_to_chunk)

            for done, future in enumerate(as_completed(future_to_chunk)):
                j, indices = future_to_chunk[future]
                try:
                    outcomes = future.result()
                except Exception as e:
                    logger.error(f"Future error for {param_axis.name.value}={param_axis.values[j]}: {str(e)}")
                    outcomes = [(None, e)] * len(indices)
                record(j, indices, outcomes)

                # Report progress
                if self._progress_callback:
                    label = (
                        f"{param_axis.name.value}={param_axis.values[j]:.6g}, "
                        f"{freqs[indices[0]]:.6g}-{freqs[indices[-1]]:.6g} Hz"
                    )
                    self._progress_callback(done + 1, total, label)

        failed.sort(key=lambda f: f.index)
        coverage = None
        if param_axis.name == SweepParameter.TAPER_FRACTION:
            coverage = vem_coverage(base, param_axis.values)

        return SweepResult(
            axis1=axis1,
            axis2=axis2,
            cf=cf,
            failed=failed,
            vem_coverage=coverage,
            total_time_ms=(time.time() - start_time) * 1000
        )


def run_sweep(
    base: BeamConfig,
    axis1: SweepAxis,
    axis2: SweepAxis,
    analysis: AnalysisSettings,
    solver: SolverSettings,
    max_workers: Optional[int] = None
) -> SweepResult:
    """Convenience wrapper around SweepRunner.run"""
    return SweepRunner(max_workers).run(base, axis1, axis2, analysis, solver)


def frequency_scan(
    base: BeamConfig,
    frequencies: Sequence[float],
    analysis: AnalysisSettings,
    solver: SolverSettings
) -> List[Optional[float]]:
    """CF versus frequency for the base configuration (None where a point failed)"""
    outcomes = SweepRunner(1).evaluate_column(
        base, None, 0.0, frequencies, analysis, solver
    )
    return [value for value, _ in outcomes]


def _nan_matrix(result: SweepResult) -> np.ndarray:
    return np.array(
        [[np.nan if v is None else v for v in row] for row in result.cf],
        dtype=float
    )


def _nanmin(values: np.ndarray) -> Optional[float]:
    return None if np.all(np.isnan(values)) else float(np.nanmin(values))


def summarize_trends(
    result: SweepResult,
    bands: Sequence[Tuple[float, float]] = ()
) -> TrendReport:
    """
    Minima, band averages and argmin parameter values of a sweep

    Args:
        result: Completed sweep
        bands: Frequency bands (Hz) over which CF is averaged

    Returns:
        TrendReport
    """
    cf = _nan_matrix(result)
    row_minima = [_nanmin(row) for row in cf]
    column_minima = [_nanmin(col) for col in cf.T]

    global_argmin = None
    if not np.all(np.isnan(cf)):
        i, j = np.unravel_index(np.nanargmin(cf), cf.shape)
        global_argmin = (int(i), int(j))

    frequency_first = result.axis1.name == SweepParameter.FREQUENCY_HZ
    freq_axis = result.axis1 if frequency_first else result.axis2
    param_axis = result.axis2 if frequency_first else result.axis1
    by_frequency = cf if frequency_first else cf.T
    freqs = np.asarray(freq_axis.values)

    summaries = []
    for lo, hi in bands:
        in_band = (freqs >= lo) & (freqs <= hi)
        if not np.any(in_band):
            logger.warning(f"No swept frequency inside band {lo}-{hi} Hz")
            continue
        block = by_frequency[in_band]
        averages: List[Optional[float]] = []
        for column in block.T:
            valid = column[~np.isnan(column)]
            averages.append(float(valid.mean()) if valid.size else None)
        candidates = [(a, v) for a, v in zip(averages, param_axis.values) if a is not None]
        argmin_value = min(candidates)[1] if candidates else None
        summaries.append(BandSummary(
            band=(lo, hi),
            parameter_values=list(param_axis.values),
            averages=averages,
            argmin_value=argmin_value
        ))

    coverage: Optional[Dict[str, float]] = None
    if result.vem_coverage is not None:
        coverage = {f"{v:.6g}": c for v, c in zip(param_axis.values, result.vem_coverage)}

    return TrendReport(
        axis1=result.axis1.name,
        axis2=result.axis2.name,
        row_minima=row_minima,
        column_minima=column_minima,
        global_argmin=global_argmin,
        bands=summaries,
        vem_coverage=coverage
    )
