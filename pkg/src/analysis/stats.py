"""
Channel statistics: forward fidelities, the fidelity test xi and the
backward error rate, estimated from transcripts or computed exactly.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

from src.adversary import IDEAL_DETECTOR, AttackStrategy, ClickOutcome, DetectorModel, attack_none, detector_distribution
from src.errors import InsufficientDataError
from src.protocol import (
    MeasurementLocus,
    ProtocolVariant,
    Transcript,
    apply_encoding,
    key_bit_from_table,
    transcript_to_frame,
    two_op_key_bit,
)
from src.qmath import Basis, Bb84State, basis_kets, bb84_density, born_probabilities

logger = logging.getLogger(__name__)

STATE_ORDER = (Bb84State.ZERO_Z, Bb84State.ONE_Z, Bb84State.PLUS_X, Bb84State.MINUS_X)


def xi_from_fidelities(f0: float, f1: float, fplus: float, fminus: float) -> float:
    return (f0 + f1 + fplus + fminus) / 2.0 - 1.0


@dataclass(frozen=True)
class ChannelStats:
    """
    Fidelities of the four forward states, xi and the backward error rate.

    Attributes:
        f0, f1, fplus, fminus: Consistent-basis check fidelities
        xi: (f0 + f1 + fplus + fminus) / 2 - 1
        e: Error rate on disclosed conclusive encode rounds
        n_check_used: Consistent-basis check rounds per state label
        n_disclosed: Disclosed conclusive encode rounds
        exact: Computed by enumeration rather than estimated
    """
    f0: float
    f1: float
    fplus: float
    fminus: float
    xi: float
    e: float
    n_check_used: Dict[str, int] = field(default_factory=dict)
    n_disclosed: int = 0
    exact: bool = False

    @classmethod
    def from_fidelities(cls, fidelities: Dict[Bb84State, float], e: float, **kwargs) -> "ChannelStats":
        f = [fidelities[s] for s in STATE_ORDER]
        return cls(*f, xi=xi_from_fidelities(*f), e=e, **kwargs)

    def to_dict(self) -> Dict:
        return {
            "f0": self.f0, "f1": self.f1, "fplus": self.fplus, "fminus": self.fminus,
            "xi": self.xi, "e": self.e,
            "n_check_used": dict(self.n_check_used), "n_disclosed": self.n_disclosed,
            "exact": self.exact,
        }


def estimate_stats(transcript: Transcript) -> ChannelStats:
    """
    Estimate fidelities and the error rate from a transcript.

    Only check rounds where Alice's basis equals Bob's basis count towards
    a fidelity; the error rate uses disclosed encode rounds with a
    conclusive detection.

    Args:
        transcript: Session transcript

    Returns:
        ChannelStats

    Raises:
        InsufficientDataError: A state has no consistent-basis check round,
            or no disclosed encode round is conclusive
    """
    frame = transcript_to_frame(transcript)
    if frame.empty:
        raise InsufficientDataError("Transcript has no rounds")

    checks = frame[(frame["mode"] == "check") & (frame["alice_check_basis"] == frame["bob_basis"])]
    checks = checks.assign(
        state=[Bb84State.from_basis_bit(Basis(b), int(bit)).value
               for b, bit in zip(checks["bob_basis"], checks["bob_bit"])],
        match=checks["alice_check_outcome"] == checks["bob_bit"],
    )
    by_state = checks.groupby("state")["match"].agg(["sum", "count"])

    fidelities, counts = {}, {}
    for state in STATE_ORDER:
        if state.value not in by_state.index:
            raise InsufficientDataError(f"No consistent-basis check rounds for state |{state.value}>")
        row = by_state.loc[state.value]
        fidelities[state] = float(row["sum"]) / float(row["count"])
        counts[state.value] = int(row["count"])

    disclosed = frame[(frame["mode"] == "encode") & frame["disclosed"].astype(bool)
                      & frame["bob_decoded_bit"].notna()]
    if disclosed.empty:
        raise InsufficientDataError("No disclosed conclusive encode rounds to estimate e")
    errors = int((disclosed["alice_key_bit"] != disclosed["bob_decoded_bit"]).sum())

    stats = ChannelStats.from_fidelities(
        fidelities, errors / len(disclosed), n_check_used=counts, n_disclosed=len(disclosed))
    logger.info(f"Estimated xi={stats.xi:.4f} e={stats.e:.4f} from {sum(counts.values())} checks, "
                f"{stats.n_disclosed} disclosed rounds")
    return stats


def _outcome_distribution(strategy: AttackStrategy, locus: MeasurementLocus,
                          detector: DetectorModel, state, basis) -> Dict[ClickOutcome, float]:
    if locus is MeasurementLocus.EVE_MEASURES:
        return strategy.announcer.distribution(state, basis)
    return detector_distribution(detector, state, basis)


def exact_stats(attack: Optional[AttackStrategy] = None,
                variant: ProtocolVariant = ProtocolVariant.TWO_OP,
                locus: MeasurementLocus = MeasurementLocus.BOB_MEASURES,
                detector: DetectorModel = IDEAL_DETECTOR) -> ChannelStats:
    """
    Fidelities and error rate from the attack's exact channels.

    Bob's four states and Alice's operations are averaged uniformly;
    no-click outcomes are excluded and double clicks split evenly, as in
    the session driver.

    Args:
        attack: Strategy whose line channels are used (no attack when omitted)
        variant: Protocol variant
        locus: Who measures the returned qubit
        detector: Bob's detector (BobMeasures only)

    Returns:
        ChannelStats with exact=True

    Raises:
        NotEnumerableError: The announcer has no exact distribution
        LocusError: Strategy requires the EveMeasures locus, or the locus or
            strategy has no announced outcome to act on (bb84_otp)
    """
    attack = attack or attack_none()
    variant = ProtocolVariant(variant)
    locus = MeasurementLocus(locus)
    if variant is ProtocolVariant.BB84_OTP:
        attack.check_otp(locus is MeasurementLocus.EVE_MEASURES)
    else:
        attack.check_locus(locus is MeasurementLocus.EVE_MEASURES)

    fidelities = {}
    p_error = 0.0
    p_conclusive = 0.0
    for state in STATE_ORDER:
        basis, bit = state.basis(), state.bit()
        received = attack.forward.channel(bb84_density(state))
        p_match = born_probabilities(received, basis_kets(basis))[bit]
        fidelities[state] = float(p_match)

        if variant is ProtocolVariant.BB84_OTP:
            # decoded = bob_bit XOR a XOR m, so an error is m != bob_bit
            p_error += 0.25 * (1.0 - p_match)
            p_conclusive += 0.25
            continue

        ops = variant.ops()
        for op in ops:
            key = two_op_key_bit(op) if variant is ProtocolVariant.TWO_OP else key_bit_from_table(basis, op)
            returned = attack.backward.channel(apply_encoding(received, op))
            weight = 0.25 / len(ops)
            dist = _outcome_distribution(attack, locus, detector, returned, basis)
            for outcome, p in dist.items():
                if outcome is ClickOutcome.NO_CLICK or p == 0.0:
                    continue
                p_conclusive += weight * p
                if outcome is ClickOutcome.DOUBLE_CLICK:
                    p_error += weight * p * 0.5
                elif (bit ^ outcome.bit()) != key:
                    p_error += weight * p

    if p_conclusive <= 0.0:
        raise InsufficientDataError("No conclusive detections under this attack and detector")
    return ChannelStats.from_fidelities(fidelities, p_error / p_conclusive, exact=True)

