"""
Attacks on a quantum line (B-to-A or A-to-B).

Each line attack has a sampling path used by sessions and an exact branch
decomposition used by the enumeration analyses. A branch carries Eve's
classical record for that branch; attacks that keep a quantum ancilla of
dimension > 1 set `quantum_memory`.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Hashable, List, Optional, Tuple

import numpy as np

from src.errors import ConfigError, DimensionMismatchError, NonUnitaryError
from src.qmath import (
    Basis,
    DensityMatrix,
    apply_on_factors,
    basis_kets,
    is_unitary,
    measure_in,
    mixture,
    partial_trace,
    project,
    tensor,
)

logger = logging.getLogger(__name__)

BREIDBART_ANGLE = np.pi / 8


@dataclass(frozen=True)
class Branch:
    """One outcome branch of a line attack"""
    probability: float
    record: Optional[Hashable]
    state: DensityMatrix


class LineAttack(ABC):
    """Eve's action on a travelling system (qubit is factor 0)"""

    name = "line"
    quantum_memory = False
    # leaves every system untouched
    identity = False

    @abstractmethod
    def apply(self, state: DensityMatrix, rng: np.random.Generator) -> Tuple[DensityMatrix, Optional[Hashable]]:
        """
        Act on one travelling system.

        Returns:
            (outgoing system, Eve's classical record or None)
        """

    @abstractmethod
    def branches(self, state: DensityMatrix) -> List[Branch]:
        """Exact decomposition of `apply` into weighted branches."""

    def channel(self, state: DensityMatrix) -> DensityMatrix:
        """Average output state (the CPTP map of the attack)."""
        return mixture([(b.probability, b.state) for b in self.branches(state) if b.probability > 0])


class Passthrough(LineAttack):
    name = "none"
    identity = True

    def apply(self, state, rng):
        return state, None

    def branches(self, state):
        return [Branch(1.0, None, state)]


class InterceptPolicy(str, Enum):
    """How an intercept-resend attacker picks her basis"""
    RANDOM_ZX = "random_zx"
    FIXED_Z = "fixed_z"
    FIXED_X = "fixed_x"
    BREIDBART = "breidbart"


def breidbart_kets() -> Tuple[np.ndarray, np.ndarray]:
    """Basis halfway between Z and X on the Bloch circle."""
    c, s = np.cos(BREIDBART_ANGLE), np.sin(BREIDBART_ANGLE)
    return np.array([c, s], dtype=complex), np.array([-s, c], dtype=complex)


class InterceptResend(LineAttack):
    """
    Measure the qubit and resend the eigenstate found.

    Args:
        policy: Basis policy
        fraction: Probability that a given qubit is intercepted
    """

    def __init__(self, policy: InterceptPolicy = InterceptPolicy.RANDOM_ZX, fraction: float = 1.0):
        if not 0.0 <= fraction <= 1.0:
            raise ConfigError(f"Intercept fraction must lie in [0, 1], got {fraction}")
        self.policy = InterceptPolicy(policy)
        self.fraction = fraction
        self.name = f"intercept_resend[{self.policy.value}]"

    def _weighted_bases(self) -> List[Tuple[float, str, Tuple[np.ndarray, np.ndarray]]]:
        if self.policy is InterceptPolicy.RANDOM_ZX:
            return [(0.5, "Z", basis_kets(Basis.Z)), (0.5, "X", basis_kets(Basis.X))]
        if self.policy is InterceptPolicy.FIXED_Z:
            return [(1.0, "Z", basis_kets(Basis.Z))]
        if self.policy is InterceptPolicy.FIXED_X:
            return [(1.0, "X", basis_kets(Basis.X))]
        return [(1.0, "B", breidbart_kets())]

    def apply(self, state, rng):
        if self.fraction < 1.0 and rng.random() >= self.fraction:
            return state, None
        options = self._weighted_bases()
        label, kets = options[0][1:]
        if len(options) > 1:
            label, kets = options[int(rng.integers(2))][1:]
        outcome, post = measure_in(state, kets, rng)
        return post, (label, outcome)

    def branches(self, state):
        result = []
        if self.fraction < 1.0:
            result.append(Branch(1.0 - self.fraction, None, state))
        for weight, label, kets in self._weighted_bases():
            for outcome, ket in enumerate(kets):
                prob, post = project(state, ket)
                if post is not None:
                    result.append(Branch(self.fraction * weight * prob, (label, outcome), post))
        return result


class UnitaryAncilla(LineAttack):
    """
    Attach a fresh ancilla |E> = |0> and apply a joint unitary U_BE.

    The ancilla stays with Eve as a new trailing factor.
    """

    def __init__(self, U_BE: np.ndarray, ancilla_dim: int, name: str = "unitary_ancilla"):
        U_BE = np.asarray(U_BE, dtype=complex)
        if ancilla_dim < 1 or U_BE.shape != (2 * ancilla_dim, 2 * ancilla_dim):
            raise DimensionMismatchError(
                f"U_BE of shape {U_BE.shape} does not act on qubit x ancilla of dim {ancilla_dim}")
        if not is_unitary(U_BE):
            raise NonUnitaryError("U_BE is not unitary")
        self.U_BE = U_BE
        self.ancilla_dim = ancilla_dim
        self.quantum_memory = ancilla_dim > 1
        self.name = name
        ground = np.zeros((ancilla_dim, ancilla_dim), dtype=complex)
        ground[0, 0] = 1.0
        self._ancilla = DensityMatrix(ground)

    def _evolve(self, state: DensityMatrix) -> DensityMatrix:
        extended = tensor(state, self._ancilla)
        return apply_on_factors(extended, self.U_BE, [0, len(extended.dims) - 1])

    def apply(self, state, rng):
        return self._evolve(state), None

    def branches(self, state):
        return [Branch(1.0, None, self._evolve(state))]


class Depolarize(LineAttack):
    """Replace the qubit with I/2 with probability p (benign line noise)."""

    def __init__(self, p: float):
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"Depolarizing probability must lie in [0, 1], got {p}")
        self.p = p
        self.name = f"depolarize[{p}]"
        self.identity = p == 0.0
        self._mixed = DensityMatrix.maximally_mixed(2)

    def _evolve(self, state: DensityMatrix) -> DensityMatrix:
        if self.p == 0.0:
            return state
        if len(state.dims) == 1:
            noise = self._mixed
        else:
            rest = partial_trace(state, range(1, len(state.dims)))
            noise = tensor(self._mixed, rest)
        return mixture([(1.0 - self.p, state), (self.p, noise.with_dims(state.dims))])

    def apply(self, state, rng):
        return self._evolve(state), None

    def branches(self, state):
        return [Branch(1.0, None, self._evolve(state))]
