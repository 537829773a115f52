"""
Entropies in bits: von Neumann, binary, Shannon and mutual information.
"""

from typing import Dict, Hashable, Mapping, Tuple

import numpy as np

from src.errors import InvalidStateError
from .states import PSD_TOL, DensityMatrix


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """
    S(rho) = -sum lambda log2 lambda, with 0 log 0 := 0.

    Eigenvalues in [-1e-10, 0) are clamped to 0; anything more negative
    is an invalid state.

    Args:
        rho: Density matrix

    Returns:
        Entropy in bits, within [0, log2(dim)]
    """
    eigenvalues = np.linalg.eigvalsh(rho.matrix)
    if eigenvalues.min() < -PSD_TOL:
        raise InvalidStateError(f"Negative eigenvalue {eigenvalues.min()}")
    eigenvalues = np.clip(eigenvalues, 0.0, 1.0)
    nonzero = eigenvalues[eigenvalues > 0]
    entropy = float(-np.sum(nonzero * np.log2(nonzero)))
    return min(max(entropy, 0.0), float(np.log2(rho.dim)))


def binary_entropy(x: float) -> float:
    """
    h(x) = -x log2 x - (1-x) log2 (1-x)

    Args:
        x: Probability in [0, 1]

    Returns:
        Entropy in bits

    Raises:
        ValueError: If x lies outside [0, 1]
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary_entropy argument must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def shannon_entropy(probabilities: Mapping[Hashable, float]) -> float:
    """Shannon entropy in bits of a discrete distribution."""
    p = np.array([v for v in probabilities.values() if v > 0], dtype=float)
    return float(-np.sum(p * np.log2(p))) if p.size else 0.0


def mutual_information(joint: Mapping[Tuple[Hashable, Hashable], float]) -> float:
    """
    I(X;Y) from a joint distribution keyed by (x, y).

    Returns:
        Mutual information in bits, clipped at 0 against rounding
    """
    px: Dict[Hashable, float] = {}
    py: Dict[Hashable, float] = {}
    for (x, y), p in joint.items():
        px[x] = px.get(x, 0.0) + p
        py[y] = py.get(y, 0.0) + p
    info = shannon_entropy(px) + shannon_entropy(py) - shannon_entropy(joint)
    return max(info, 0.0)
