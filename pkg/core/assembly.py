"""
Mass matrix, complex stiffness matrix and load vector of the Galerkin model
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple
import logging
import math

import numpy as np
from scipy import special

from config import QUADRATURE_MARGIN, MIN_BASIS_SIZE
from models.schemas import BeamConfig
from .basis import BasisSet, recombination_matrix
from .exceptions import AssemblyError, ConfigError
from .section import section_properties


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralModel:
    """
    Assembled discrete system (-omega^2 M + K) tau0 = f0

    M_compact and K_compact are the same matrices in the recombined
    coordinates psi = T phi used by the solvers.
    """
    M: np.ndarray
    K: np.ndarray
    f0: np.ndarray
    n: int
    quad_order: int
    T: np.ndarray
    M_compact: np.ndarray  # T M T^T
    K_compact: np.ndarray  # T K T^T

    @property
    def is_elastic(self) -> bool:
        """True when the stiffness carries no loss"""
        return bool(np.all(self.K.imag == 0.0))

    @classmethod
    def from_matrices(
        cls,
        M: np.ndarray,
        K: np.ndarray,
        f0: np.ndarray,
        quad_order: int = 0
    ) -> "SpectralModel":
        """Wrap assembled (or hand-built) matrices and derive the recombined pair"""
        M = np.atleast_2d(np.asarray(M))
        K = np.atleast_2d(np.asarray(K))
        f0 = np.atleast_1d(np.asarray(f0, dtype=float))
        n = M.shape[0]
        T = recombination_matrix(n)
        return cls(
            M=M,
            K=K,
            f0=f0,
            n=n,
            quad_order=quad_order,
            T=T,
            M_compact=_symmetric(T @ M @ T.T),
            K_compact=_symmetric(T @ K @ T.T)
        )


def min_quadrature_order(n: int, m: float) -> int:
    """
    Gauss nodes per segment for a basis of size n and taper exponent m

    The stiffness integrand on the taper is a product of two second
    derivatives (degree n - 3 each) and h_b^3 (degree 3m for integer m);
    q nodes integrate degree 2q - 1 exactly.

    Args:
        n: Basis size
        m: Power-law exponent

    Returns:
        Node count per segment
    """
    if n < MIN_BASIS_SIZE:
        raise ConfigError(f"basis size must be at least {MIN_BASIS_SIZE}, got {n}", key="solver.n")
    exact = math.ceil((2 * (n - 3) + 3 * m + 1) / 2)
    return max(n + QUADRATURE_MARGIN, exact)


def segment_breakpoints(cfg: BeamConfig) -> Tuple[float, ...]:
    """Panel edges where D and mu lose smoothness"""
    return (0.0, cfg.L1, cfg.L2, cfg.L)


def segment_quadrature(cfg: BeamConfig, quad_order: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gauss-Legendre nodes and weights on [0, L1], [L1, L2] and [L2, L]

    Returns:
        (nodes, weights) concatenated over the segments
    """
    ref_nodes, ref_weights = special.roots_legendre(quad_order)
    edges = segment_breakpoints(cfg)
    nodes = []
    weights = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (ref_nodes + 1.0))
        weights.append(half * ref_weights)
    return np.concatenate(nodes), np.concatenate(weights)


def _symmetric(matrix: np.ndarray) -> np.ndarray:
    """Mirror the upper triangle so the result is exactly symmetric"""
    upper = np.triu(matrix)
    return upper + np.triu(matrix, 1).T


def force_vector(basis: BasisSet, x: float, F0: float) -> np.ndarray:
    """Generalized load of a transverse point force F0 at station x"""
    return F0 * basis.values(np.array([x]))[:, 0]


def assemble(
    cfg: BeamConfig,
    basis: BasisSet,
    quad_order: Optional[int] = None
) -> SpectralModel:
    """
    Assemble M, K and f0 by segment-wise Gauss-Legendre quadrature

    Args:
        cfg: Beam configuration
        basis: Trial functions (basis.L must equal cfg.L)
        quad_order: Nodes per segment; None or 0 picks the minimum

    Returns:
        SpectralModel
    """
    if not math.isclose(basis.L, cfg.L):
        raise ConfigError(f"basis length {basis.L} differs from beam length {cfg.L}", key="beam.L")

    minimum = min_quadrature_order(basis.n, cfg.m)
    if not quad_order:
        quad_order = minimum
    elif quad_order < minimum:
        raise ConfigError(
            f"quadrature order {quad_order} below the minimum {minimum} for n={basis.n}, m={cfg.m}",
            key="solver.quad_order"
        )

    nodes, weights = segment_quadrature(cfg, quad_order)
    _, _, _, D, mu = section_properties(nodes, cfg)
    if not (np.all(np.isfinite(D)) and np.all(np.isfinite(mu))):
        raise AssemblyError("non-finite section properties at quadrature nodes")

    phi = basis.values(nodes)
    phi_dd = basis.second_derivatives(nodes)

    M = _symmetric((phi * (weights * mu)) @ phi.T)
    K = _symmetric((phi_dd * (weights * D)) @ phi_dd.T)
    f0 = force_vector(basis, cfg.L3, cfg.F0)

    if not (np.all(np.isfinite(M)) and np.all(np.isfinite(K))):
        raise AssemblyError("non-finite entries in the assembled matrices")

    logger.debug(
        f"Assembled n={basis.n} with {quad_order} nodes/segment, "
        f"max|K|={np.max(np.abs(K)):.3e}, trace(M)={np.trace(M):.4e}"
    )

    return SpectralModel.from_matrices(M, K, f0, quad_order)


def build_model(cfg: BeamConfig, n: int, quad_order: Optional[int] = None) -> Tuple[BasisSet, SpectralModel]:
    """Basis and assembled model for a configuration"""
    basis = BasisSet(n=n, L=cfg.L)
    return basis, assemble(cfg, basis, quad_order)


def _write_matrix(path: Path, matrix: np.ndarray) -> None:
    matrix = np.atleast_2d(matrix)
    with open(path, "w", newline="\n") as f:
        for row in matrix:
            if np.iscomplexobj(row):
                cells = [f"{v.real:.17g} {v.imag:.17g}" for v in row]
            else:
                cells = [f"{v:.17g}" for v in row]
            f.write(" ".join(cells) + "\n")


def dump_matrices(model: SpectralModel, directory: Path) -> Tuple[Path, Path, Path]:
    """
    Debug dump of M, K and f0 as whitespace-delimited matrices

    Complex entries are written as "re im" pairs.

    Returns:
        Paths of the M, K and f0 files
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = (directory / "M.dat", directory / "K.dat", directory / "f0.dat")
    _write_matrix(paths[0], model.M)
    _write_matrix(paths[1], model.K)
    _write_matrix(paths[2], model.f0[:, None])
    return paths
