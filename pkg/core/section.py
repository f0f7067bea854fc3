"""
Composite-section properties of the tapered beam with a free damping layer
"""
from dataclasses import dataclass
from typing import Union

import numpy as np

from models.schemas import BeamConfig
from .exceptions import DomainError


ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class SectionSample:
    """Composite-section state at one station"""
    x: float
    h_b: float
    h_v: float
    zbar: complex
    D: complex
    mu: float


def _check_stations(x: ArrayLike, cfg: BeamConfig) -> np.ndarray:
    stations = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(stations)) or np.any(stations < 0.0) or np.any(stations > cfg.L):
        raise DomainError(f"station outside [0, {cfg.L}] m: {x}")
    return stations


def base_thickness(x: ArrayLike, cfg: BeamConfig) -> ArrayLike:
    """
    Thickness of the base beam

    Args:
        x: Station(s) in [0, L]
        cfg: Beam configuration

    Returns:
        h1 on the uniform section, the power-law taper on [L1, L]
    """
    stations = _check_stations(x, cfg)
    ratio = np.clip((cfg.L - stations) / (cfg.L - cfg.L1), 0.0, None)
    taper = cfg.h2 + ratio ** cfg.m * (cfg.h1 - cfg.h2)
    h_b = np.where(stations < cfg.L1, cfg.h1, taper)
    return float(h_b) if h_b.ndim == 0 else h_b


def vem_thickness(x: ArrayLike, cfg: BeamConfig) -> ArrayLike:
    """Damping-layer thickness: h3 on [L2, L], zero elsewhere (H(0) = 1)"""
    stations = _check_stations(x, cfg)
    h_v = np.where(stations >= cfg.L2, cfg.h3, 0.0)
    return float(h_v) if h_v.ndim == 0 else h_v


def complex_modulus(E_vs: float, eta: float) -> complex:
    """Storage modulus with hysteretic loss: E_vs (1 + i eta)"""
    return complex(E_vs, E_vs * eta)


def section_properties(x: np.ndarray, cfg: BeamConfig):
    """
    Vectorized section properties at an array of stations

    The base layer occupies z in [0, h_b] and the damping layer z in [-h_v, 0].
    The damping modulus is complex, so the neutral axis and bending stiffness
    are complex as well.

    Args:
        x: Stations in [0, L]
        cfg: Beam configuration

    Returns:
        (h_b, h_v, zbar, D, mu) arrays
    """
    stations = np.atleast_1d(_check_stations(x, cfg))
    h_b = np.atleast_1d(base_thickness(stations, cfg))
    h_v = np.atleast_1d(vem_thickness(stations, cfg))
    E_b = cfg.E_b
    E_v = complex_modulus(cfg.E_vs, cfg.eta)

    zbar = (E_b * h_b ** 2 - E_v * h_v ** 2) / (2.0 * (E_b * h_b + E_v * h_v))
    z_b = h_b / 2.0
    z_v = -h_v / 2.0

    A_b = cfg.B * h_b
    A_v = cfg.B * h_v
    I_b = cfg.B * h_b ** 3 / 12.0
    I_v = cfg.B * h_v ** 3 / 12.0

    D = E_b * (I_b + A_b * (z_b - zbar) ** 2) + E_v * (I_v + A_v * (z_v - zbar) ** 2)
    mu = cfg.B * (h_b * cfg.rho_b + h_v * cfg.rho_v)
    return h_b, h_v, zbar, D, mu


def section_sample(x: float, cfg: BeamConfig) -> SectionSample:
    """Composite-section state at a single station"""
    h_b, h_v, zbar, D, mu = section_properties(np.array([x], dtype=float), cfg)
    return SectionSample(
        x=float(x),
        h_b=float(h_b[0]),
        h_v=float(h_v[0]),
        zbar=complex(zbar[0]),
        D=complex(D[0]),
        mu=float(mu[0]),
    )
