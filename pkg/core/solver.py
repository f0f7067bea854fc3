"""
Harmonic forced response and modal analysis of the assembled model
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence
import logging
import warnings

import numpy as np
from scipy.linalg import (
    LinAlgError,
    LinAlgWarning,
    cho_factor,
    cho_solve,
    cholesky,
    eigvals,
    eigvalsh,
    get_lapack_funcs,
    lu_factor,
    lu_solve,
    solve,
)

from config import (
    RESONANCE_CONDITION_LIMIT,
    RESIDUAL_LIMIT,
    REFINEMENT_STEPS,
    RIGID_BODY_COUNT,
    CONVERGENCE_TOLERANCE,
)
from models.schemas import BeamConfig, ModalResult
from .assembly import SpectralModel, build_model
from .basis import BasisSet
from .exceptions import ConfigError, DomainError, ResonanceError, SolverError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HarmonicSolution:
    """Steady-state generalized coordinates at one frequency"""
    omega: float
    tau0: np.ndarray
    residual: float


@dataclass(frozen=True)
class FrequencyResponse:
    """Receptance magnitudes |W(x)| / F0 at measurement stations"""
    frequencies_hz: np.ndarray
    stations: np.ndarray
    magnitude: np.ndarray  # (frequencies, stations)

    @property
    def mean(self) -> np.ndarray:
        """Average over the stations"""
        return self.magnitude.mean(axis=1)


def _equilibration(diag: np.ndarray) -> np.ndarray:
    """Symmetric diagonal scaling 1/sqrt|d_i| (1 where d_i vanishes)"""
    diag = np.abs(diag)
    scale = np.ones_like(diag)
    nonzero = diag > 0
    scale[nonzero] = 1.0 / np.sqrt(diag[nonzero])
    return scale


def harmonic_response(model: SpectralModel, omega: float) -> HarmonicSolution:
    """
    Solve (-omega^2 M + K) tau0 = f0

    The dynamic stiffness is factored in the recombined coordinates after
    diagonal equilibration; a reciprocal
    condition estimate below 1/RESONANCE_CONDITION_LIMIT is reported as a
    resonance rather than returning a meaningless solution.

    Args:
        model: Assembled model
        omega: Angular frequency (rad/s), > 0

    Returns:
        HarmonicSolution
    """
    if not omega > 0:
        raise DomainError(f"angular frequency must be positive, got {omega}")

    A = model.K - omega ** 2 * model.M
    A_compact = model.K_compact - omega ** 2 * model.M_compact
    if model.is_elastic:
        A = A.real
        A_compact = A_compact.real
    # |K_ii| + omega^2 M_ii does not vanish at a resonance
    scale = _equilibration(np.abs(np.diag(model.K_compact)) + omega ** 2 * np.diag(model.M_compact))
    scaled = scale[:, None] * A_compact * scale[None, :]

    anorm = np.linalg.norm(scaled, 1)
    if anorm == 0.0:
        raise ResonanceError(omega)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(scaled, check_finite=False)
    if np.any(np.diag(lu) == 0.0):
        raise ResonanceError(omega)

    gecon, = get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0:
        raise SolverError(f"condition estimate failed (info={info})")
    if rcond * RESONANCE_CONDITION_LIMIT < 1.0:
        raise ResonanceError(omega, f"condition estimate {1.0 / max(rcond, 1e-300):.3e} exceeds limit")

    def correction(rhs: np.ndarray) -> np.ndarray:
        y = scale * lu_solve((lu, piv), scale * (model.T @ rhs), check_finite=False)
        return model.T.T @ y

    f_norm = np.linalg.norm(model.f0)
    if f_norm == 0.0:
        return HarmonicSolution(omega=float(omega), tau0=np.zeros(model.n, dtype=complex), residual=0.0)

    # Solved in the recombined coordinates, refined against the original system
    tau0 = correction(model.f0)
    residual = np.linalg.norm(A @ tau0 - model.f0) / f_norm
    for _ in range(REFINEMENT_STEPS):
        if residual <= RESIDUAL_LIMIT:
            break
        tau0 = tau0 + correction(model.f0 - A @ tau0)
        residual = np.linalg.norm(A @ tau0 - model.f0) / f_norm
    if residual > RESIDUAL_LIMIT:
        raise SolverError(f"relative residual {residual:.3e} at omega={omega:.6g} exceeds {RESIDUAL_LIMIT}")

    return HarmonicSolution(omega=float(omega), tau0=tau0.astype(complex), residual=float(residual))


def _check_rigid_block(model: SpectralModel) -> None:
    r = RIGID_BODY_COUNT
    K = model.K_compact
    scale = np.max(np.abs(K)) if K.size else 0.0
    if scale > 0 and np.max(np.abs(K[:r, :])) > 1e-12 * scale:
        raise SolverError("stiffness couples to the rigid-body functions; basis is not Legendre-ordered")


def flexible_eigenvalues(model: SpectralModel) -> np.ndarray:
    """
    Eigenvalues of K phi = lambda M phi excluding the rigid-body pair

    The rigid rows of K vanish, so the rigid coordinates are condensed out of
    M exactly. Both matrices are taken in the recombined coordinates, where
    the stiffness block is a weighted Legendre Gram matrix. The condensed
    mass is Cholesky-factored (S = C C^T) and the inverted standard problem
    C^T K_ff^-1 C is solved, which resolves the low end of the spectrum to
    relative accuracy despite the wide spread of K.

    Returns:
        Eigenvalues sorted by real part
    """
    _check_rigid_block(model)
    r = RIGID_BODY_COUNT
    M = model.M_compact
    M_rr = M[:r, :r]
    M_rf = M[:r, r:]
    S = M[r:, r:] - M_rf.T @ solve(M_rr, M_rf, assume_a="pos")
    S = 0.5 * (S + S.T)
    K_ff = model.K_compact[r:, r:]

    try:
        C = cholesky(S, lower=True)
        scale = _equilibration(np.diag(K_ff.real))
        C_scaled = scale[:, None] * C
        K_scaled = scale[:, None] * K_ff * scale[None, :]
        if model.is_elastic:
            K_real = K_scaled.real
            G = C_scaled.T @ cho_solve(cho_factor(K_real, lower=True), C_scaled)
            nu = eigvalsh(0.5 * (G + G.T))
            lam = 1.0 / nu
        else:
            G = C_scaled.T @ lu_solve(lu_factor(K_scaled), C_scaled)
            nu = eigvals(G)
            lam = 1.0 / nu
    except (LinAlgError, ValueError) as e:
        raise SolverError(f"eigenvalue solve failed: {e}") from e

    if not np.all(np.isfinite(lam)):
        raise SolverError("eigenvalue solve produced non-finite values")
    return lam[np.argsort(lam.real, kind="stable")]


def eigenvalues(model: SpectralModel) -> np.ndarray:
    """Full spectrum: the two rigid-body eigenvalues (exactly 0) then the flexible ones"""
    lam = flexible_eigenvalues(model)
    rigid = np.zeros(RIGID_BODY_COUNT, dtype=lam.dtype)
    return np.concatenate([rigid, lam])


def modal_frequencies(model: SpectralModel, count: int) -> List[ModalResult]:
    """
    Natural frequencies f = sqrt(Re lambda) / 2 pi and modal loss factors

    Args:
        model: Assembled model
        count: Number of flexible modes, at most n - 2

    Returns:
        ModalResult list in ascending frequency
    """
    if count < 1 or count > model.n - RIGID_BODY_COUNT:
        raise ConfigError(
            f"mode count must be in [1, {model.n - RIGID_BODY_COUNT}] for n={model.n}, got {count}",
            key="--count"
        )

    lam = flexible_eigenvalues(model)[:count]
    results = []
    for i, value in enumerate(lam):
        re = float(np.real(value))
        if re <= 0:
            raise SolverError(f"non-positive eigenvalue {value} for mode {i + 1}")
        loss = 0.0 if model.is_elastic else float(np.imag(value)) / re
        results.append(ModalResult(
            mode_index=i + 1,
            frequency_hz=float(np.sqrt(re) / (2.0 * np.pi)),
            modal_loss_factor=loss
        ))
    return results


def _check_stations(x: np.ndarray, L: float) -> None:
    if np.any(x < 0.0) or np.any(x > L):
        raise DomainError(f"grid points must lie in [0, {L}] m")


def displacement_amplitude(
    sol: HarmonicSolution,
    basis: BasisSet,
    x_grid: Sequence[float]
) -> np.ndarray:
    """Complex amplitude W(x) = sum_l tau0_l phi_l(x); w = Re(W e^{i omega t})"""
    x = np.asarray(x_grid, dtype=float)
    _check_stations(x, basis.L)
    return sol.tau0 @ basis.values(x)


def frequency_response(
    model: SpectralModel,
    basis: BasisSet,
    frequencies_hz: Sequence[float],
    stations: Sequence[float],
    F0: float = 1.0
) -> FrequencyResponse:
    """
    Receptance magnitude at a set of stations over a frequency list

    Resonances are reported as NaN rather than aborting the scan.
    """
    freqs = np.asarray(frequencies_hz, dtype=float)
    x = np.asarray(stations, dtype=float)
    _check_stations(x, basis.L)
    phi = basis.values(x)
    magnitude = np.full((freqs.size, x.size), np.nan)
    for i, f in enumerate(freqs):
        try:
            sol = harmonic_response(model, 2.0 * np.pi * f)
        except ResonanceError as e:
            logger.warning(f"Skipping {f:.6g} Hz: {e}")
            continue
        magnitude[i] = np.abs(sol.tau0 @ phi) / abs(F0)
    return FrequencyResponse(frequencies_hz=freqs, stations=x, magnitude=magnitude)


def select_basis_size(
    cfg: BeamConfig,
    count: int,
    start: int = 60,
    step: int = 10,
    max_n: int = 300,
    tolerance: float = CONVERGENCE_TOLERANCE
) -> int:
    """
    Smallest basis size whose first `count` modal frequencies move by less
    than `tolerance` (relative) when the basis grows by `step`

    Returns:
        Converged basis size
    """
    previous: Optional[np.ndarray] = None
    n = max(start, count + 2)
    while n <= max_n:
        _, model = build_model(cfg, n)
        current = np.array([m.frequency_hz for m in modal_frequencies(model, count)])
        if previous is not None:
            change = np.max(np.abs(current - previous) / current)
            logger.info(f"n={n}: max relative change {change:.2e}")
            if change < tolerance:
                return n - step
        previous = current
        n += step
    raise SolverError(f"modal frequencies not converged up to n={max_n}")
