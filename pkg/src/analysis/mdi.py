"""
Density-matrix checks of line A-to-B security.

Alice's two-op key bit is held in a classical register A. Bob's forward
state rho_B passes Eve's joint unitary with a fresh ancilla; Alice's Y
then flips the qubit in the A=1 branch:

    rho_ABE = 1/2 |0><0| (x) rho_BE + 1/2 |1><1| (x) Y rho_BE Y^dagger

Because both of Bob's basis ensembles average to I/2, the state is the
same whichever basis he used; the privacy-amplification rate follows as
S(rho_ABE) - S(rho_BE).
"""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from src.errors import DimensionMismatchError
from src.protocol import Transcript
from src.qmath import (
    Bb84State,
    DensityMatrix,
    PauliOp,
    apply_unitary,
    bb84_density,
    mixture,
    partial_trace,
    pauli_matrix,
    random_unitary,
    tensor,
    von_neumann_entropy,
)

logger = logging.getLogger(__name__)

# Weights of a basis-dependent input used as the negative control
CONTROL_WEIGHTS = (0.75, 0.25)


def _ancilla_ground(dim: int) -> DensityMatrix:
    ground = np.zeros((dim, dim), dtype=complex)
    ground[0, 0] = 1.0
    return DensityMatrix(ground)


def basis_ensemble(states: Tuple[Bb84State, Bb84State],
                   weights: Tuple[float, float] = (0.5, 0.5)) -> DensityMatrix:
    """Bob's average state given his basis."""
    return mixture([(w, bb84_density(s)) for w, s in zip(weights, states)])


def build_rho_abe(U_BE: np.ndarray, ancilla_dim: int,
                  input_state: Optional[DensityMatrix] = None) -> DensityMatrix:
    """
    Build rho_ABE for the two-op key bit.

    Args:
        U_BE: Eve's unitary on qubit (x) ancilla, shape (2d, 2d)
        ancilla_dim: Ancilla dimension d
        input_state: Bob's forward state (I/2 when omitted)

    Returns:
        DensityMatrix with dims (2, 2, d), factors ordered A, B, E

    Raises:
        DimensionMismatchError: U_BE does not match the ancilla dimension
        NonUnitaryError: U_BE is not unitary
    """
    U_BE = np.asarray(U_BE, dtype=complex)
    if ancilla_dim < 1 or U_BE.shape != (2 * ancilla_dim, 2 * ancilla_dim):
        raise DimensionMismatchError(
            f"U_BE of shape {U_BE.shape} does not act on qubit x ancilla of dim {ancilla_dim}")
    rho_b = input_state if input_state is not None else DensityMatrix.maximally_mixed(2)

    rho_be = apply_unitary(tensor(rho_b, _ancilla_ground(ancilla_dim)), U_BE)
    flipped = apply_unitary(rho_be, pauli_matrix(PauliOp.Y), subsystem=0)

    a0 = np.diag([1.0, 0.0]).astype(complex)
    a1 = np.diag([0.0, 1.0]).astype(complex)
    matrix = 0.5 * np.kron(a0, rho_be.matrix) + 0.5 * np.kron(a1, flipped.matrix)
    return DensityMatrix(matrix, (2, 2, ancilla_dim))


def pa_rate(rho_abe: DensityMatrix) -> float:
    """
    S(rho_ABE) - S(rho_BE), with rho_BE the partial trace over A (factor 0).
    """
    rho_be = partial_trace(rho_abe, range(1, len(rho_abe.dims)))
    return von_neumann_entropy(rho_abe) - von_neumann_entropy(rho_be)


@dataclass(frozen=True)
class BasisIndependenceReport:
    max_deviation: float
    tol: float
    passed: bool
    ancilla_dim: int
    negative_control: bool = False
    r_pa: Optional[float] = None
    seed: Optional[Tuple[int, int]] = None

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["seed"] = None if self.seed is None else list(self.seed)
        return data


def verify_basis_independence(U_BE: np.ndarray, ancilla_dim: int, tol: float = 1e-12,
                              negative_control: bool = False) -> BasisIndependenceReport:
    """
    Compare rho_ABE built from Bob's Z-basis and X-basis ensembles.

    Args:
        U_BE: Eve's joint unitary
        ancilla_dim: Ancilla dimension
        tol: Largest accepted entrywise deviation
        negative_control: Weight the ensembles 3/4 : 1/4 so that they differ

    Returns:
        BasisIndependenceReport (passed iff max deviation <= tol)
    """
    weights = CONTROL_WEIGHTS if negative_control else (0.5, 0.5)
    rho_z = basis_ensemble((Bb84State.ZERO_Z, Bb84State.ONE_Z), weights)
    rho_x = basis_ensemble((Bb84State.PLUS_X, Bb84State.MINUS_X), weights)
    abe_z = build_rho_abe(U_BE, ancilla_dim, rho_z)
    abe_x = build_rho_abe(U_BE, ancilla_dim, rho_x)
    deviation = float(np.max(np.abs(abe_z.matrix - abe_x.matrix)))
    return BasisIndependenceReport(deviation, tol, deviation <= tol, ancilla_dim, negative_control)


def mdi_trial(seed: int, trial: int, ancilla_dim: int, tol: float = 1e-12,
              negative_control: bool = False) -> BasisIndependenceReport:
    """
    One randomized check: Haar U_BE from the generator seeded with
    [seed, trial, ancilla_dim], basis independence and the PA rate.

    The (seed, trial) pair in the report, with the ancilla dim, replays it.
    """
    U = random_unitary(2 * ancilla_dim, np.random.default_rng([seed, trial, ancilla_dim]))
    report = verify_basis_independence(U, ancilla_dim, tol, negative_control)
    r_pa = pa_rate(build_rho_abe(U, ancilla_dim))
    return BasisIndependenceReport(
        report.max_deviation, tol, report.passed, ancilla_dim, negative_control,
        r_pa=r_pa, seed=(seed, trial))


def exact_forward_ensemble() -> DensityMatrix:
    """Average of Bob's four states with equal weights."""
    return mixture([(0.25, bb84_density(s)) for s in Bb84State])


def forward_ensemble(transcript: Transcript) -> DensityMatrix:
    """Empirical average of the states Bob emitted in a session."""
    counts = {s: 0 for s in Bb84State}
    for r in transcript.rounds:
        counts[r.bob_state] += 1
    total = len(transcript.rounds)
    return mixture([(n / total, bb84_density(s)) for s, n in counts.items() if n])


def ensemble_deviation(rho: DensityMatrix, reference: Optional[DensityMatrix] = None) -> float:
    """Largest entrywise distance from `reference` (I/2 by default)."""
    if reference is None:
        reference = DensityMatrix.maximally_mixed(rho.dim)
    return float(np.max(np.abs(rho.matrix - reference.matrix)))


def sweep_random_unitaries(trials: int, ancilla_dims: Sequence[int], seed: int = 0,
                           tol: float = 1e-12, negative_control: bool = False):
    """Yield mdi_trial reports for every (trial, ancilla dim) pair."""
    for trial in range(trials):
        for dim in ancilla_dims:
            yield mdi_trial(seed, trial, int(dim), tol, negative_control)
