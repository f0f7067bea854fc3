"""
Legendre trial functions on the mapped coordinate xi = 2x/L - 1
"""
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from config import MIN_BASIS_SIZE


ArrayLike = Union[float, np.ndarray]


def map_to_reference(x: ArrayLike, L: float) -> ArrayLike:
    """Map physical stations on [0, L] to xi on [-1, 1]"""
    if np.ndim(x) == 0:
        return 2.0 * float(x) / L - 1.0
    return 2.0 * np.asarray(x, dtype=float) / L - 1.0


def legendre_table(n: int, xi: ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Values, first and second derivatives of P_0 .. P_{n-1}

    Uses the three-term recursion for the values and
    P'_{l+1} = (2l+1) P_l + P'_{l-1} for each derivative order, so no
    division by (1 - xi^2) is needed near the tip at xi = 1.

    Args:
        n: Number of polynomials
        xi: Reference coordinate(s)

    Returns:
        (P, dP, d2P), each of shape (n, len(xi))
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    P = np.zeros((n, xi.size))
    dP = np.zeros_like(P)
    d2P = np.zeros_like(P)

    P[0] = 1.0
    if n > 1:
        P[1] = xi
        dP[1] = 1.0
    for l in range(1, n - 1):
        P[l + 1] = ((2 * l + 1) * xi * P[l] - l * P[l - 1]) / (l + 1)
        dP[l + 1] = (2 * l + 1) * P[l] + dP[l - 1]
        d2P[l + 1] = (2 * l + 1) * dP[l] + d2P[l - 1]
    return P, dP, d2P


def legendre_eval(l: int, xi: ArrayLike) -> ArrayLike:
    """P_l(xi) by the three-term recursion"""
    P, _, _ = legendre_table(l + 1, xi)
    return P[l] if np.ndim(xi) else float(P[l, 0])


def legendre_d2_physical(l: int, x: ArrayLike, L: float) -> ArrayLike:
    """Second derivative of P_l(xi(x)) with respect to x"""
    xi = map_to_reference(x, L)
    _, _, d2P = legendre_table(l + 1, xi)
    scaled = (2.0 / L) ** 2 * d2P[l]
    return scaled if np.ndim(x) else float(scaled[0])


def recombination_matrix(n: int) -> np.ndarray:
    """
    Compact recombination T with (T phi)_{k+2}'' = P_k in xi

    Rows 0 and 1 keep the rigid-body functions. Row k + 2 combines
    phi_{k+2}, phi_k and phi_{k-2} (only indices >= 2) using
    P_k = [(P''_{k+2} - P''_k)/(2k+3) - (P''_k - P''_{k-2})/(2k-1)] / (2k+1).
    T is lower triangular with a nonzero diagonal, so T A T^T is a congruent
    system whose stiffness block is a weighted Legendre Gram matrix.

    Args:
        n: Basis size

    Returns:
        (n, n) real matrix
    """
    T = np.zeros((n, n))
    T[0, 0] = 1.0
    if n > 1:
        T[1, 1] = 1.0
    for k in range(n - 2):
        row = k + 2
        T[row, k + 2] = 1.0 / ((2 * k + 1) * (2 * k + 3))
        if k >= 2:
            T[row, k] = -(1.0 / (2 * k + 3) + 1.0 / (2 * k - 1)) / (2 * k + 1)
        if k >= 4:
            T[row, k - 2] = 1.0 / ((2 * k - 1) * (2 * k + 1))
    return T


@dataclass(frozen=True)
class BasisSet:
    """The first n Legendre polynomials on a beam of length L"""
    n: int
    L: float

    def __post_init__(self):
        if self.n < MIN_BASIS_SIZE:
            raise ValueError(f"basis needs at least {MIN_BASIS_SIZE} functions, got {self.n}")
        if self.L <= 0:
            raise ValueError(f"beam length must be positive, got {self.L}")

    def values(self, x: ArrayLike) -> np.ndarray:
        """phi_l(x) for every l, shape (n, len(x))"""
        P, _, _ = legendre_table(self.n, map_to_reference(x, self.L))
        return P

    def second_derivatives(self, x: ArrayLike) -> np.ndarray:
        """phi_l''(x) in physical coordinates, shape (n, len(x))"""
        _, _, d2P = legendre_table(self.n, map_to_reference(x, self.L))
        return (2.0 / self.L) ** 2 * d2P
