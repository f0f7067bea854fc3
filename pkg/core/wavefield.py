"""
Spatiotemporal field reconstruction, envelope, CF metric and f-k spectrum
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple
import logging

import numpy as np

from config import (
    DEFAULT_WINDOW,
    DEFAULT_STATIONS,
    DEFAULT_PERIODS,
    DEFAULT_SAMPLES_PER_PERIOD,
    DEFAULT_ZERO_PAD,
    MIN_STATIONS,
    MIN_SAMPLES_PER_PERIOD,
    NEAR_FIELD_DECAYS,
)
from models.schemas import BeamConfig
from .basis import BasisSet
from .exceptions import DomainError, UndefinedMetricError
from .section import section_sample
from .solver import HarmonicSolution, displacement_amplitude


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WaveField:
    """Steady-state field w(x_j, t_k) = Re(W(x_j) e^{i omega t_k})"""
    x_grid: np.ndarray
    t_grid: np.ndarray
    W: np.ndarray
    w: np.ndarray  # (stations, time samples)
    omega: float
    nt_per_period: int

    @property
    def dx(self) -> float:
        return float(self.x_grid[1] - self.x_grid[0])

    @property
    def dt(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])


@dataclass(frozen=True)
class Spectrum2D:
    """Normalized frequency-wavenumber magnitude; positive k travels toward +x"""
    freqs: np.ndarray
    wavenumbers: np.ndarray
    magnitude: np.ndarray  # (freqs, wavenumbers)

    def dominant(self) -> Tuple[float, float]:
        """(frequency, wavenumber) of the largest magnitude"""
        i, j = np.unravel_index(np.argmax(self.magnitude), self.magnitude.shape)
        return float(self.freqs[i]), float(self.wavenumbers[j])


def window_grid(window: Tuple[float, float], nx: int, L: float) -> np.ndarray:
    """Uniform stations across an analysis window inside [0, L]"""
    x_lo, x_hi = window
    if not 0.0 <= x_lo < x_hi <= L:
        raise DomainError(f"window [{x_lo}, {x_hi}] must lie inside [0, {L}] m")
    if nx < MIN_STATIONS:
        raise DomainError(f"at least {MIN_STATIONS} stations required, got {nx}")
    return np.linspace(x_lo, x_hi, nx)


def time_grid(omega: float, periods: int, nt_per_period: int) -> np.ndarray:
    """Samples over an integral number of periods, endpoint excluded"""
    if nt_per_period < MIN_SAMPLES_PER_PERIOD:
        raise DomainError(f"at least {MIN_SAMPLES_PER_PERIOD} samples per period required")
    period = 2.0 * np.pi / omega
    count = periods * nt_per_period
    return np.arange(count) * (period / nt_per_period)


def field_from_amplitude(
    x_grid: np.ndarray,
    W: np.ndarray,
    omega: float,
    periods: int = DEFAULT_PERIODS,
    nt_per_period: int = DEFAULT_SAMPLES_PER_PERIOD
) -> WaveField:
    """Build a WaveField from complex amplitudes on a uniform grid"""
    x_grid = np.asarray(x_grid, dtype=float)
    W = np.asarray(W, dtype=complex)
    t = time_grid(omega, periods, nt_per_period)
    w = np.real(W[:, None] * np.exp(1j * omega * t[None, :]))
    return WaveField(x_grid=x_grid, t_grid=t, W=W, w=w, omega=float(omega), nt_per_period=nt_per_period)


def reconstruct(
    sol: HarmonicSolution,
    basis: BasisSet,
    window: Tuple[float, float] = DEFAULT_WINDOW,
    nx: int = DEFAULT_STATIONS,
    periods: int = DEFAULT_PERIODS,
    nt_per_period: int = DEFAULT_SAMPLES_PER_PERIOD
) -> WaveField:
    """
    Reconstruct the steady-state field over an analysis window

    Args:
        sol: Harmonic solution
        basis: Trial functions used for the solution
        window: (x_lo, x_hi) in metres
        nx: Stations in the window
        periods: Periods to sample
        nt_per_period: Samples per period

    Returns:
        WaveField
    """
    x = window_grid(window, nx, basis.L)
    W = displacement_amplitude(sol, basis, x)
    return field_from_amplitude(x, W, sol.omega, periods, nt_per_period)


def envelope(field: WaveField) -> np.ndarray:
    """Per-station amplitude |W(x_j)|"""
    return np.abs(field.W)


def envelope_from_samples(field: WaveField, samples: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Per-station max_k |w(x_j, t_k)|; approaches |W| as sampling refines

    `samples` replaces the displacement samples, e.g. with velocity_field(field).
    """
    values = field.w if samples is None else np.asarray(samples)
    return np.max(np.abs(values), axis=1)


def velocity_field(field: WaveField) -> np.ndarray:
    """Velocity samples normalized by their peak, v / v_max"""
    v = np.real(1j * field.omega * field.W[:, None] * np.exp(1j * field.omega * field.t_grid[None, :]))
    peak = np.max(np.abs(v))
    return v / peak if peak > 0 else v


def cost_function(env: Sequence[float]) -> float:
    """
    Traveling-wave cost function (max - min) / (max + min)

    0 for a pure traveling wave, 1 for a pure standing wave.
    """
    env = np.asarray(env, dtype=float)
    if env.size == 0 or np.any(env < 0) or not np.all(np.isfinite(env)):
        raise DomainError("envelope must be a non-empty, finite, non-negative array")
    v_max = float(np.max(env))
    v_min = float(np.min(env))
    if v_max == 0.0:
        raise UndefinedMetricError("CF is undefined for an all-zero envelope")
    return (v_max - v_min) / (v_max + v_min)


def _check_uniform(grid: np.ndarray, name: str) -> float:
    steps = np.diff(grid)
    if steps.size == 0 or np.any(steps <= 0):
        raise DomainError(f"{name} grid must be strictly increasing")
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise DomainError(f"{name} grid must be uniform")
    return float(steps[0])


def spectrum_2d(field: WaveField, zero_pad: int = DEFAULT_ZERO_PAD) -> Spectrum2D:
    """
    Frequency-wavenumber magnitude of w(x, t)

    A real FFT over time keeps the positive frequencies; the spatial
    transform is taken with the opposite sign convention so that a wave
    cos(omega t - k x) peaks at +k. The spatial length is padded to an odd
    count so the wavenumber axis is symmetric about zero.

    Args:
        field: Reconstructed field (uniform grids, at least 32 x 32 samples)
        zero_pad: Spatial zero-padding factor

    Returns:
        Spectrum2D normalized to unit peak
    """
    nx, nt = field.w.shape
    if nx < MIN_STATIONS or nt < MIN_STATIONS:
        raise DomainError(f"spectrum needs at least {MIN_STATIONS} stations and samples, got {nx} x {nt}")
    dx = _check_uniform(field.x_grid, "spatial")
    dt = _check_uniform(field.t_grid, "time")

    n_pad = zero_pad * nx
    if n_pad % 2 == 0:
        n_pad += 1

    temporal = np.fft.rfft(field.w, axis=1)
    spatial = np.fft.fftshift(np.fft.fft(temporal, n=n_pad, axis=0), axes=0)
    # numpy's kernel is e^{-i kappa x}; reverse to read e^{-i k x} at +k
    spatial = spatial[::-1, :]

    freqs = np.fft.rfftfreq(nt, dt)
    wavenumbers = 2.0 * np.pi * np.fft.fftshift(np.fft.fftfreq(n_pad, dx))
    magnitude = np.abs(spatial).T
    peak = magnitude.max()
    if peak > 0:
        magnitude = magnitude / peak

    logger.debug(f"2D spectrum {magnitude.shape}, dk={wavenumbers[1] - wavenumbers[0]:.4g} rad/m")
    return Spectrum2D(freqs=freqs, wavenumbers=wavenumbers, magnitude=magnitude)


def dispersion_wavenumber(omega: float, D_real: float, mu: float) -> float:
    """Euler-Bernoulli flexural wavenumber (mu omega^2 / D)^(1/4)"""
    if omega <= 0 or D_real <= 0 or mu <= 0:
        raise DomainError("omega, D and mu must be positive")
    return float((mu * omega ** 2 / D_real) ** 0.25)


def wavenumber_resolution(field: WaveField) -> float:
    """Unpadded wavenumber bin width 2 pi / (nx dx)"""
    return 2.0 * np.pi / (field.x_grid.size * field.dx)


def near_field_cut(cfg: BeamConfig, omega: float, decays: float = NEAR_FIELD_DECAYS) -> float:
    """
    First station counted by CF: `decays` evanescent lengths 1/k past the force

    The force's near field falls off as e^{-k |x - L3|} with the uniform-section
    wavenumber k, so it inflates the envelope next to the load at low frequency.
    Returns -inf when decays is 0.
    """
    if decays <= 0:
        return -np.inf
    sample = section_sample(0.0, cfg)
    k = dispersion_wavenumber(omega, sample.D.real, sample.mu)
    return cfg.L3 + decays / k


def far_field_stations(x_grid: np.ndarray, cut: float) -> np.ndarray:
    """Mask of stations at or past `cut`; the downstream half of the grid is always kept"""
    x = np.asarray(x_grid, dtype=float)
    return x >= min(cut, 0.5 * (x[0] + x[-1]))


def field_cost(
    sol: HarmonicSolution,
    basis: BasisSet,
    window: Tuple[float, float] = DEFAULT_WINDOW,
    nx: int = DEFAULT_STATIONS,
    x_grid: Optional[np.ndarray] = None,
    cfg: Optional[BeamConfig] = None,
    near_field_decay: float = NEAR_FIELD_DECAYS
) -> float:
    """
    CF of the displacement envelope over a window

    With `cfg` given, stations inside the force near field are dropped
    (see near_field_cut); without it every window station counts.
    """
    x = window_grid(window, nx, basis.L) if x_grid is None else np.asarray(x_grid, dtype=float)
    if cfg is not None:
        x = x[far_field_stations(x, near_field_cut(cfg, sol.omega, near_field_decay))]
    return cost_function(np.abs(displacement_amplitude(sol, basis, x)))
