"""
Exact enumeration of the discrete protocol choices.

Every distribution here is built by walking Bob's four states, the line
attacks' branches, Alice's operations and the announced outcomes, and
adding up probabilities; nothing is sampled.
"""

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Hashable, Optional, Tuple

from src.adversary import AttackStrategy, attack_none
from src.errors import NotEnumerableError
from src.protocol import ProtocolVariant, apply_encoding, key_bit_from_table, two_op_key_bit
from src.qmath import Bb84State, basis_kets, bb84_density, born_probabilities, mutual_information

logger = logging.getLogger(__name__)

BC_TOL = 1e-12
# Enumeration noise floor for information values
INFO_DIGITS = 12

Joint = Dict[Tuple[Hashable, ...], float]


def _key_bit(variant: ProtocolVariant, basis, op) -> int:
    return two_op_key_bit(op) if variant is ProtocolVariant.TWO_OP else key_bit_from_table(basis, op)


def eve_view_distribution(strategy: AttackStrategy, variant: ProtocolVariant,
                          leak_bob_bit: bool = False) -> Joint:
    """
    Joint distribution of (Alice's key bit, Eve's view).

    Eve's view is Bob's released basis, her line records and the announced
    outcome (the public OTP bit for bb84_otp), optionally with Bob's
    prepared bit as a counterfactual leak.

    Raises:
        NotEnumerableError: The strategy keeps quantum memory or its
            announcer has no exact distribution
    """
    variant = ProtocolVariant(variant)
    if strategy.quantum_memory:
        raise NotEnumerableError(f"Strategy '{strategy.name}' keeps quantum memory")

    joint: Joint = defaultdict(float)
    for state in Bb84State:
        basis, bit = state.basis(), state.bit()
        leak = (bit,) if leak_bob_bit else ()
        for fwd in strategy.forward.branches(bb84_density(state)):
            if fwd.probability <= 0.0:
                continue
            p_state = 0.25 * fwd.probability

            if variant is ProtocolVariant.BB84_OTP:
                probs = born_probabilities(fwd.state, basis_kets(basis))
                for m, p_m in enumerate(probs):
                    for a in (0, 1):
                        view = (basis.value, fwd.record, a ^ m) + leak
                        joint[(a, view)] += p_state * 0.5 * p_m
                continue

            ops = variant.ops()
            for op in ops:
                key = _key_bit(variant, basis, op)
                for bwd in strategy.backward.branches(apply_encoding(fwd.state, op)):
                    if bwd.probability <= 0.0:
                        continue
                    weight = p_state * bwd.probability / len(ops)
                    for outcome, p in strategy.announcer.distribution(bwd.state, basis).items():
                        if p > 0.0:
                            view = (basis.value, fwd.record, bwd.record, outcome.value) + leak
                            joint[(key, view)] += weight * p
    return dict(joint)


def eve_information(strategy: AttackStrategy, variant: ProtocolVariant,
                    leak_bob_bit: bool = False) -> float:
    """
    Exact mutual information between Alice's key bit and Eve's view.

    Args:
        strategy: Enumerable strategy (registry line attacks and announcers)
        variant: Protocol variant
        leak_bob_bit: Add Bob's prepared bit to Eve's view (control)

    Returns:
        Bits in [0, 1], rounded to 12 decimals

    Raises:
        NotEnumerableError: Strategy cannot be enumerated
    """
    info = mutual_information(eve_view_distribution(strategy, variant, leak_bob_bit))
    info = max(0.0, round(info, INFO_DIGITS))
    logger.debug(f"I(key; Eve) = {info} for {strategy.name} / {ProtocolVariant(variant).value}")
    return info


def _four_op_round(strategy: AttackStrategy) -> Joint:
    """(bob_state, a, announced bit, decoded bit) for four-op with honest measurement."""
    dist: Joint = defaultdict(float)
    for state in Bb84State:
        basis, bit = state.basis(), state.bit()
        received = strategy.forward.channel(bb84_density(state))
        for op in ProtocolVariant.FOUR_OP.ops():
            a = key_bit_from_table(basis, op)
            probs = born_probabilities(apply_encoding(received, op), basis_kets(basis))
            for outcome, p in enumerate(probs):
                dist[(state.value, a, outcome, bit ^ outcome)] += 0.25 * 0.25 * p
    return dict(dist)


def _otp_round(strategy: AttackStrategy) -> Joint:
    """(bob_state, a, public OTP bit, decoded bit) for BB84 forward + OTP backward."""
    dist: Joint = defaultdict(float)
    for state in Bb84State:
        basis, bit = state.basis(), state.bit()
        received = strategy.forward.channel(bb84_density(state))
        probs = born_probabilities(received, basis_kets(basis))
        for m, p in enumerate(probs):
            for a in (0, 1):
                public = a ^ m
                dist[(state.value, a, public, bit ^ public)] += 0.25 * 0.5 * p
    return dict(dist)


def _product(single: Joint, n: int) -> Joint:
    joint: Joint = {}
    for combo in itertools.product(single.items(), repeat=n):
        key = tuple(k for k, _ in combo)
        p = 1.0
        for _, q in combo:
            p *= q
        joint[key] = p
    return joint


def _public_marginal(single: Joint) -> Dict[int, float]:
    marginal = {0: 0.0, 1: 0.0}
    for (_, _, public, _), p in single.items():
        marginal[public] += p
    return marginal


@dataclass(frozen=True)
class EquivalenceReport:
    n_enum: int
    max_deviation: float
    passed: bool
    outcomes: int
    public_marginal_four_op: Dict[int, float]
    public_marginal_otp: Dict[int, float]
    attack: str = "none"

    def to_dict(self) -> Dict:
        return {
            "n_enum": self.n_enum, "max_deviation": self.max_deviation, "passed": self.passed,
            "outcomes": self.outcomes, "attack": self.attack,
            "public_marginal_four_op": {str(k): v for k, v in self.public_marginal_four_op.items()},
            "public_marginal_otp": {str(k): v for k, v in self.public_marginal_otp.items()},
        }


def compare_protocols_bc(n_enum: int = 1, forward_attack: Optional[AttackStrategy] = None) -> EquivalenceReport:
    """
    Compare four-op with honest measurement against BB84 + OTP, exactly.

    Both distributions run over (bob_state, a, backward public bit,
    decoded bit) for `n_enum` independent rounds, with the same forward
    attack folded into both.

    Args:
        n_enum: Rounds enumerated jointly (1 to 3)
        forward_attack: Strategy whose forward line is applied (none when omitted)

    Returns:
        EquivalenceReport (passed iff every entry agrees within 1e-12)
    """
    if not 1 <= n_enum <= 3:
        raise ValueError(f"n_enum must lie in 1..3, got {n_enum}")
    strategy = forward_attack or attack_none()
    four_op, otp = _four_op_round(strategy), _otp_round(strategy)
    joint_four, joint_otp = _product(four_op, n_enum), _product(otp, n_enum)

    keys = set(joint_four) | set(joint_otp)
    deviation = max(abs(joint_four.get(k, 0.0) - joint_otp.get(k, 0.0)) for k in keys)
    report = EquivalenceReport(
        n_enum=n_enum,
        max_deviation=float(deviation),
        passed=deviation <= BC_TOL,
        outcomes=len(keys),
        public_marginal_four_op=_public_marginal(four_op),
        public_marginal_otp=_public_marginal(otp),
        attack=strategy.name,
    )
    logger.info(f"Protocol equivalence ({strategy.name}, n={n_enum}): deviation={deviation:.3e} "
                f"{'passed' if report.passed else 'FAILED'}")
    return report
