"""
Bob's and Alice's per-round actions.
"""

from typing import Tuple

import numpy as np

from src.errors import ConfigError
from src.qmath import (
    Basis,
    Bb84State,
    DensityMatrix,
    PauliOp,
    PureState,
    apply_unitary,
    bb84_ket,
    measure_projective,
    pauli_matrix,
)
from .types import Mode, ModeDecision, ProtocolVariant, SessionConfig

_STATES = (Bb84State.ZERO_Z, Bb84State.ONE_Z, Bb84State.PLUS_X, Bb84State.MINUS_X)
_BASES = (Basis.Z, Basis.X)

# Table I: ops encoding bit 1 for each of Bob's bases
_FLIP_OPS = {
    Basis.X: frozenset({PauliOp.Z, PauliOp.Y}),
    Basis.Z: frozenset({PauliOp.X, PauliOp.Y}),
}


def bob_prepare(rng: np.random.Generator) -> Tuple[Bb84State, PureState]:
    """
    Pick one of the four states uniformly.

    Args:
        rng: Protocol generator

    Returns:
        (state label, its ket)
    """
    state = _STATES[int(rng.integers(4))]
    return state, bb84_ket(state)


def alice_receive(state: DensityMatrix, rng: np.random.Generator, config: SessionConfig) -> ModeDecision:
    """
    Switch the round to check or encode mode; in check mode measure the
    qubit in a uniformly random basis.

    Args:
        state: Received system (qubit first)
        rng: Protocol generator
        config: Session configuration (p_check)

    Returns:
        ModeDecision
    """
    if rng.random() >= config.p_check:
        return ModeDecision(Mode.ENCODE)
    basis = _BASES[int(rng.integers(2))]
    outcome, _ = measure_projective(state, basis, rng)
    return ModeDecision(Mode.CHECK, basis, outcome)


def alice_encode(variant: ProtocolVariant, rng: np.random.Generator) -> PauliOp:
    """
    Pick an encoding operation uniformly from the variant's set.

    Raises:
        ConfigError: For the BB84 + OTP variant, which has no quantum encoding
    """
    ops = ProtocolVariant(variant).ops()
    if not ops:
        raise ConfigError(f"Variant '{variant}' has no quantum encoding")
    return ops[int(rng.integers(len(ops)))]


def apply_encoding(state: DensityMatrix, op: PauliOp) -> DensityMatrix:
    """Conjugate the qubit factor by the encoding matrix."""
    return apply_unitary(state, pauli_matrix(op), subsystem=0)


def key_bit_from_table(basis: Basis, op: PauliOp) -> int:
    """Key bit encoded by `op` when Bob used `basis` (Table I)."""
    return int(PauliOp(op) in _FLIP_OPS[Basis(basis)])


def two_op_key_bit(op: PauliOp) -> int:
    return int(PauliOp(op) is PauliOp.Y)


def bob_decode(prepared_bit: int, outcome_bit: int) -> int:
    """Alice's bit is the flip between what Bob sent and what he found."""
    return int(prepared_bit) ^ int(outcome_bit)
