"""
Qubit states, bases and Pauli encodings.

All matrices follow the two-way protocol convention: Y is the real
antisymmetric matrix |0><1| - |1><0| (standard Pauli-Y times i).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from src.errors import DimensionMismatchError, InvalidStateError

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
UNITARY_TOL = 1e-10

SQRT_HALF = 1.0 / np.sqrt(2.0)


class Basis(str, Enum):
    """Measurement/preparation basis"""
    Z = "Z"
    X = "X"

    def other(self) -> "Basis":
        return Basis.X if self is Basis.Z else Basis.Z


class PauliOp(str, Enum):
    """Alice's encoding operations"""
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"


class Bb84State(str, Enum):
    """The four states Bob prepares"""
    ZERO_Z = "0"
    ONE_Z = "1"
    PLUS_X = "+"
    MINUS_X = "-"

    def basis(self) -> Basis:
        return Basis.Z if self in (Bb84State.ZERO_Z, Bb84State.ONE_Z) else Basis.X

    def bit(self) -> int:
        return 0 if self in (Bb84State.ZERO_Z, Bb84State.PLUS_X) else 1

    @classmethod
    def from_basis_bit(cls, basis: Basis, bit: int) -> "Bb84State":
        if basis is Basis.Z:
            return cls.ZERO_Z if bit == 0 else cls.ONE_Z
        return cls.PLUS_X if bit == 0 else cls.MINUS_X


_PAULI = {
    PauliOp.I: np.array([[1, 0], [0, 1]], dtype=complex),
    PauliOp.X: np.array([[0, 1], [1, 0]], dtype=complex),
    PauliOp.Y: np.array([[0, 1], [-1, 0]], dtype=complex),
    PauliOp.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}

_BASIS_KETS = {
    Basis.Z: (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)),
    Basis.X: (np.array([SQRT_HALF, SQRT_HALF], dtype=complex),
              np.array([SQRT_HALF, -SQRT_HALF], dtype=complex)),
}


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex, copy=True)
    array.flags.writeable = False
    return array


def _check_dims(dims: Sequence[int], size: int) -> Tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims) or int(np.prod(dims)) != size:
        raise DimensionMismatchError(f"Factor dims {dims} do not multiply to {size}")
    return dims


@dataclass(frozen=True)
class PureState:
    """Unit-norm ket, optionally split into tensor factors."""
    amplitudes: np.ndarray
    dims: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        norm = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidStateError(f"Ket squared-norm is {norm}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(amplitudes))
        dims = self.dims if self.dims is not None else (amplitudes.size,)
        object.__setattr__(self, "dims", _check_dims(dims, amplitudes.size))

    @classmethod
    def trusted(cls, amplitudes: np.ndarray, dims: Tuple[int, ...]) -> "PureState":
        """Wrap a ket produced from valid states without re-validating it."""
        state = object.__new__(cls)
        object.__setattr__(state, "amplitudes", _frozen(np.reshape(amplitudes, -1)))
        object.__setattr__(state, "dims", tuple(dims))
        return state

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix.trusted(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)


@dataclass(frozen=True)
class DensityMatrix:
    """
    Hermitian, unit-trace, positive semidefinite operator.

    `dims` lists the tensor factors; the travelling qubit is always factor 0
    and Eve's ancillas, when present, follow it.
    """
    matrix: np.ndarray
    dims: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatchError(f"Density matrix must be square, got {matrix.shape}")
        if np.max(np.abs(matrix - matrix.conj().T)) > HERMITIAN_TOL:
            raise InvalidStateError("Density matrix is not Hermitian")
        trace = np.trace(matrix)
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"Density matrix trace is {trace}, expected 1")
        smallest = float(np.linalg.eigvalsh(matrix)[0])
        if smallest < -PSD_TOL:
            raise InvalidStateError(f"Density matrix has negative eigenvalue {smallest}")
        object.__setattr__(self, "matrix", _frozen(matrix))
        dims = self.dims if self.dims is not None else (matrix.shape[0],)
        object.__setattr__(self, "dims", _check_dims(dims, matrix.shape[0]))

    @classmethod
    def trusted(cls, matrix: np.ndarray, dims: Tuple[int, ...]) -> "DensityMatrix":
        """
        Wrap the output of an operation on valid states (conjugation, tensor
        product, partial trace, projection) without re-validating it.
        """
        state = object.__new__(cls)
        object.__setattr__(state, "matrix", _frozen(matrix))
        object.__setattr__(state, "dims", tuple(dims))
        return state

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def maximally_mixed(cls, dim: int = 2) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)

    def with_dims(self, dims: Sequence[int]) -> "DensityMatrix":
        return DensityMatrix.trusted(self.matrix, _check_dims(dims, self.dim))

    def allclose(self, other: "DensityMatrix", atol: float = 1e-12) -> bool:
        return self.matrix.shape == other.matrix.shape and bool(
            np.all(np.abs(self.matrix - other.matrix) <= atol))


def pauli_matrix(op: PauliOp) -> np.ndarray:
    """
    Matrix of an encoding operation in the protocol convention.

    Args:
        op: Encoding operation

    Returns:
        2x2 complex matrix (read-only copy)
    """
    return _frozen(_PAULI[PauliOp(op)])


def basis_kets(basis: Basis) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenkets (bit 0, bit 1) of a basis."""
    zero, one = _BASIS_KETS[Basis(basis)]
    return zero.copy(), one.copy()


def basis_projectors(basis: Basis) -> Tuple[np.ndarray, np.ndarray]:
    """Rank-one projectors (bit 0, bit 1) of a basis."""
    return tuple(np.outer(k, k.conj()) for k in basis_kets(basis))


def bb84_ket(state: Bb84State) -> PureState:
    """
    Ket of one of the four prepared states, |+-> = (|0> +- |1>)/sqrt(2).

    Args:
        state: Prepared state

    Returns:
        Two-dimensional PureState
    """
    state = Bb84State(state)
    return PureState(basis_kets(state.basis())[state.bit()])


def bb84_density(state: Bb84State) -> DensityMatrix:
    """Projector onto a prepared state."""
    return bb84_ket(state).to_density()
