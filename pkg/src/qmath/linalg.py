"""
Small-dimension linear algebra on states: conjugation, tensor products,
partial traces, projective measurement and Haar-random unitaries.

States built here from already valid states go through the `trusted`
constructors; validation happens where states enter from outside.
"""

import logging
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import qr

from src.errors import DimensionMismatchError, InvalidStateError, NonUnitaryError
from .states import (
    UNITARY_TOL,
    Basis,
    DensityMatrix,
    PureState,
    basis_kets,
)

logger = logging.getLogger(__name__)

State = Union[PureState, DensityMatrix]

EMPTY_BRANCH = 1e-15


def is_unitary(U: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return bool(np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0]))) <= tol)


def _check_factor_op(op: np.ndarray, dims: Sequence[int], subsystem: int):
    if not 0 <= subsystem < len(dims):
        raise DimensionMismatchError(f"Factor {subsystem} out of range for dims {tuple(dims)}")
    if op.shape != (dims[subsystem], dims[subsystem]):
        raise DimensionMismatchError(
            f"Operator of shape {op.shape} does not act on factor of dim {dims[subsystem]}")


def _contract(op: np.ndarray, tensor_form: np.ndarray, axis: int) -> np.ndarray:
    """Apply `op` to one axis of a reshaped state."""
    return np.moveaxis(np.tensordot(op, tensor_form, axes=([1], [axis])), 0, axis)


def _on_ket(op: np.ndarray, amplitudes: np.ndarray, dims: Tuple[int, ...], subsystem: int) -> np.ndarray:
    return _contract(op, amplitudes.reshape(dims), subsystem).reshape(-1)


def _conjugate(op: np.ndarray, matrix: np.ndarray, dims: Tuple[int, ...], subsystem: int) -> np.ndarray:
    """op rho op^dagger with op acting on one factor."""
    n = len(dims)
    tensor_form = _contract(op, matrix.reshape(dims + dims), subsystem)
    tensor_form = _contract(op.conj(), tensor_form, n + subsystem)
    return tensor_form.reshape(matrix.shape)


def apply_unitary(rho: DensityMatrix, U: np.ndarray,
                  subsystem: Optional[int] = None) -> DensityMatrix:
    """
    Conjugate a state by a unitary, U rho U^dagger.

    Args:
        rho: Input state
        U: Unitary on the whole space, or on factor `subsystem` when given
        subsystem: Optional factor index for a local unitary

    Returns:
        Evolved state with the same factor dims

    Raises:
        DimensionMismatchError: If U does not match the state
        NonUnitaryError: If U is not unitary within 1e-10
    """
    U = np.asarray(U, dtype=complex)
    if not is_unitary(U):
        raise NonUnitaryError("Operator is not unitary")
    if subsystem is not None:
        _check_factor_op(U, rho.dims, subsystem)
        return DensityMatrix.trusted(_conjugate(U, rho.matrix, rho.dims, subsystem), rho.dims)
    if U.shape != rho.matrix.shape:
        raise DimensionMismatchError(
            f"Unitary of shape {U.shape} does not match state of dim {rho.dim}")
    return DensityMatrix.trusted(U @ rho.matrix @ U.conj().T, rho.dims)


def permute_factors(rho: DensityMatrix, order: Sequence[int]) -> DensityMatrix:
    """Reorder tensor factors so that new factor k is old factor order[k]."""
    dims = rho.dims
    n = len(dims)
    order = list(order)
    if sorted(order) != list(range(n)):
        raise DimensionMismatchError(f"{order} is not a permutation of {n} factors")
    tensor_form = rho.matrix.reshape(dims + dims)
    permuted = tensor_form.transpose(order + [n + k for k in order])
    new_dims = tuple(dims[k] for k in order)
    return DensityMatrix.trusted(permuted.reshape(rho.dim, rho.dim), new_dims)


def apply_on_factors(rho: DensityMatrix, U: np.ndarray, factors: Sequence[int]) -> DensityMatrix:
    """
    Conjugate by a unitary acting jointly on the listed factors.

    Args:
        rho: State on the product space
        U: Unitary on the listed factors, in the listed order
        factors: Factor indices

    Returns:
        Evolved state with the original factor order
    """
    factors = list(factors)
    n = len(rho.dims)
    order = factors + [k for k in range(n) if k not in factors]
    moved = permute_factors(rho, order)
    acted = int(np.prod([rho.dims[k] for k in factors], dtype=int))
    U = np.asarray(U, dtype=complex)
    if U.shape != (acted, acted):
        raise DimensionMismatchError(f"Unitary of shape {U.shape} does not act on dim {acted}")
    full = np.kron(U, np.eye(rho.dim // acted))
    evolved = apply_unitary(moved, full)
    inverse = [order.index(k) for k in range(n)]
    return permute_factors(evolved, inverse)


def tensor(a: State, b: State) -> State:
    """
    Tensor product of two kets or two density matrices.

    Args:
        a: Left factor
        b: Right factor

    Returns:
        Product state whose dims concatenate the inputs' dims
    """
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState.trusted(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims)
    a = a.to_density() if isinstance(a, PureState) else a
    b = b.to_density() if isinstance(b, PureState) else b
    return DensityMatrix.trusted(np.kron(a.matrix, b.matrix), a.dims + b.dims)


def partial_trace(rho: DensityMatrix, keep: Iterable[int],
                  dims: Optional[Sequence[int]] = None) -> DensityMatrix:
    """
    Trace out every factor not listed in `keep`.

    Args:
        rho: State on the product space
        keep: Indices of the factors to keep (order preserved as given sorted)
        dims: Factor dimensions; defaults to rho.dims

    Returns:
        Reduced state on the kept factors

    Raises:
        DimensionMismatchError: If dims are inconsistent with the matrix
    """
    dims = tuple(rho.dims if dims is None else dims)
    if int(np.prod(dims)) != rho.dim:
        raise DimensionMismatchError(f"Dims {dims} inconsistent with matrix dim {rho.dim}")
    keep = sorted(set(keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionMismatchError(f"Kept factors {keep} out of range for dims {dims}")
    n = len(dims)
    tensor_form = rho.matrix.reshape(dims + dims)
    # einsum labels: row indices 0..n-1, column indices n..2n-1; traced ones share a label
    row = list(range(n))
    col = [i if i not in keep else n + i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(tensor_form, row + col, out)
    kept_dims = tuple(dims[k] for k in keep)
    size = int(np.prod(kept_dims, dtype=int))
    return DensityMatrix.trusted(reduced.reshape(size, size), kept_dims)


def _factor_matrix(state: State, subsystem: int) -> np.ndarray:
    """Reduced density matrix of a single factor."""
    dims = state.dims
    if not 0 <= subsystem < len(dims):
        raise DimensionMismatchError(f"Factor {subsystem} out of range for dims {dims}")
    if isinstance(state, PureState):
        psi = np.moveaxis(state.amplitudes.reshape(dims), subsystem, 0).reshape(dims[subsystem], -1)
        return psi @ psi.conj().T
    if len(dims) == 1:
        return state.matrix
    return partial_trace(state, [subsystem]).matrix


def born_probabilities(state: State, kets: Tuple[np.ndarray, ...],
                       subsystem: int = 0) -> np.ndarray:
    """Outcome probabilities of a rank-one projective measurement on one factor."""
    reduced = _factor_matrix(state, subsystem)
    if any(np.asarray(ket).shape != (reduced.shape[0],) for ket in kets):
        raise DimensionMismatchError(f"Measurement kets do not match factor of dim {reduced.shape[0]}")
    probs = np.array([float(np.vdot(ket, reduced @ ket).real) for ket in kets])
    probs = np.clip(probs, 0.0, 1.0)
    return probs / probs.sum()


def measure_in(state: State, kets: Tuple[np.ndarray, ...], rng: np.random.Generator,
               subsystem: int = 0) -> Tuple[int, State]:
    """
    Projective measurement of one factor onto a list of orthonormal kets.

    Args:
        state: Ket or density matrix
        kets: Orthonormal measurement kets for the factor
        rng: Generator owned by the caller
        subsystem: Factor index

    Returns:
        (outcome index, post-measurement state of the same kind)
    """
    probs = born_probabilities(state, kets, subsystem)
    outcome = int(np.searchsorted(np.cumsum(probs), rng.random(), side="right"))
    outcome = min(outcome, len(kets) - 1)
    ket = np.asarray(kets[outcome], dtype=complex)
    projector = np.outer(ket, ket.conj())
    if isinstance(state, PureState):
        projected = _on_ket(projector, state.amplitudes, state.dims, subsystem)
        return outcome, PureState.trusted(projected / np.linalg.norm(projected), state.dims)
    projected = _conjugate(projector, state.matrix, state.dims, subsystem)
    return outcome, DensityMatrix.trusted(projected / np.trace(projected).real, state.dims)


def measure_projective(state: State, basis: Basis, rng: np.random.Generator,
                       subsystem: int = 0) -> Tuple[int, State]:
    """
    Measure one qubit factor in the Z or X basis.

    Args:
        state: Ket or density matrix
        basis: Measurement basis
        rng: Generator owned by the caller
        subsystem: Index of the qubit factor

    Returns:
        (outcome bit, post-measurement state)
    """
    rho_dims = state.dims
    if rho_dims[subsystem] != 2:
        raise DimensionMismatchError(f"Factor {subsystem} is not a qubit (dim {rho_dims[subsystem]})")
    return measure_in(state, basis_kets(basis), rng, subsystem)


def project(rho: DensityMatrix, ket: np.ndarray, subsystem: int = 0) -> Tuple[float, Optional[DensityMatrix]]:
    """
    Unnormalized projection branch of one factor onto a ket.

    Returns:
        (probability, normalized post-state or None when the branch is empty)
    """
    ket = np.asarray(ket, dtype=complex)
    projector = np.outer(ket, ket.conj())
    _check_factor_op(projector, rho.dims, subsystem)
    projected = _conjugate(projector, rho.matrix, rho.dims, subsystem)
    prob = float(np.trace(projected).real)
    if prob <= EMPTY_BRANCH:
        return 0.0, None
    return prob, DensityMatrix.trusted(projected / prob, rho.dims)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """
    Haar-random unitary from the QR decomposition of a complex Ginibre matrix.

    Args:
        dim: Matrix dimension (>= 1)
        rng: Generator owned by the caller

    Returns:
        dim x dim unitary
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = qr(z)
    d = np.diag(r)
    # fix the column phases so the distribution is Haar
    return q * (d / np.abs(d))


def mixture(weighted: Sequence[Tuple[float, DensityMatrix]]) -> DensityMatrix:
    """Convex combination of states with common dims."""
    if not weighted:
        raise InvalidStateError("Empty mixture")
    dims = weighted[0][1].dims
    if any(w < 0 for w, _ in weighted):
        raise InvalidStateError("Mixture weights must be non-negative")
    if any(rho.dims != dims for _, rho in weighted):
        raise DimensionMismatchError("Mixture components have different factor dims")
    total = sum(w for w, _ in weighted)
    if total <= 0:
        raise InvalidStateError("Mixture weights sum to zero")
    matrix = sum(w * rho.matrix for w, rho in weighted) / total
    return DensityMatrix.trusted(matrix, dims)
