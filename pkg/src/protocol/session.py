"""
Session drivers for the three protocol variants.

The session generator spawns four independent streams: protocol choices,
forward line, backward line, and measurement (Bob's detectors or Eve's
announcement). Paired runs that differ only in the measurement locus
therefore make identical protocol choices.
"""

import logging
from dataclasses import replace
from typing import List, Optional

import numpy as np
from tqdm import tqdm

from src.adversary import AttackStrategy, ClickOutcome, attack_none, detector_click
from src.errors import OrderingViolationError
from src.qmath import Basis, measure_projective
from .parties import (
    alice_encode,
    alice_receive,
    apply_encoding,
    bob_decode,
    bob_prepare,
    key_bit_from_table,
    two_op_key_bit,
)
from .types import MeasurementLocus, Mode, ProtocolVariant, RoundRecord, SessionConfig, Transcript

logger = logging.getLogger(__name__)


class BasisGate:
    """Holds Bob's basis until Alice has received the forward qubit."""

    def __init__(self, basis: Basis):
        self._basis = basis
        self._received = False

    def mark_received(self):
        self._received = True

    def release(self) -> Basis:
        if not self._received:
            raise OrderingViolationError("Bob's basis released before Alice received the qubit")
        return self._basis


def _streams(config: SessionConfig, rng: Optional[np.random.Generator]):
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    return rng.spawn(4)


def _check_record(index, bob_state, decision) -> RoundRecord:
    return RoundRecord(
        index=index,
        bob_basis=bob_state.basis(),
        bob_bit=bob_state.bit(),
        mode=Mode.CHECK,
        alice_check_basis=decision.check_basis,
        alice_check_outcome=decision.check_outcome,
    )


def _squash(outcome: ClickOutcome, rng: np.random.Generator) -> Optional[int]:
    """Conclusive bit; double clicks become a uniformly random bit."""
    if outcome is ClickOutcome.DOUBLE_CLICK:
        return int(rng.integers(2))
    return outcome.bit()


def run_session(config: SessionConfig, attack: Optional[AttackStrategy] = None,
                rng: Optional[np.random.Generator] = None, progress: bool = False) -> Transcript:
    """
    Run one two-way session end to end.

    Args:
        config: Session configuration
        attack: Adversary (no attack when omitted); owned by this session
        rng: Session generator; defaults to one seeded with config.seed
        progress: Show a tqdm progress bar

    Returns:
        Immutable Transcript

    Raises:
        LocusError: Strategy requires the EveMeasures locus
    """
    if config.variant is ProtocolVariant.BB84_OTP:
        return run_bb84_otp_session(config, rng, attack=attack, progress=progress)

    attack = attack or attack_none()
    eve_measures = config.locus is MeasurementLocus.EVE_MEASURES
    attack.check_locus(eve_measures)
    protocol_rng, forward_rng, backward_rng, measure_rng = _streams(config, rng)
    attack.bind(forward_rng, backward_rng, measure_rng)
    logger.info(f"Session start: variant={config.variant.value} locus={config.locus.value} "
                f"attack={attack.name} n={config.n_rounds} seed={config.seed}")

    rounds: List[RoundRecord] = []
    iterator = tqdm(range(config.n_rounds), desc="rounds", disable=not progress)
    for index in iterator:
        bob_state, ket = bob_prepare(protocol_rng)
        gate = BasisGate(bob_state.basis())
        state = attack.on_forward(ket.to_density())

        decision = alice_receive(state, protocol_rng, config)
        gate.mark_received()
        if decision.mode is Mode.CHECK:
            rounds.append(_check_record(index, bob_state, decision))
            continue

        op = alice_encode(config.variant, protocol_rng)
        disclosed = bool(protocol_rng.random() < config.disclose_fraction)
        state = attack.on_backward(apply_encoding(state, op))

        if eve_measures:
            outcome = attack.announce(gate.release())
        else:
            outcome = detector_click(config.detector, state, gate.release(), measure_rng)
        bit = _squash(outcome, measure_rng)

        rounds.append(RoundRecord(
            index=index,
            bob_basis=bob_state.basis(),
            bob_bit=bob_state.bit(),
            mode=Mode.ENCODE,
            alice_op=op,
            alice_key_bit=two_op_key_bit(op) if config.variant is ProtocolVariant.TWO_OP else None,
            announced_outcome=outcome,
            bob_decoded_bit=None if bit is None else bob_decode(bob_state.bit(), bit),
            disclosed=disclosed,
        ))
    attack.finish()

    if config.variant is ProtocolVariant.FOUR_OP:
        # Bob's bases are announced in one batch after all measurements
        rounds = [
            _with_key_bit(r, key_bit_from_table(r.bob_basis, r.alice_op)) if r.mode is Mode.ENCODE else r
            for r in rounds
        ]

    transcript = Transcript.from_rounds(config, rounds, attack.name)
    _log_summary(transcript)
    return transcript


def _with_key_bit(record: RoundRecord, bit: int) -> RoundRecord:
    return replace(record, alice_key_bit=bit)


def run_bb84_otp_session(config: SessionConfig, rng: Optional[np.random.Generator] = None,
                         attack: Optional[AttackStrategy] = None, progress: bool = False) -> Transcript:
    """
    Run the equivalent protocol: BB84 on line B-to-A, classical OTP on line A-to-B.

    In encode mode Bob releases his basis after Alice's receipt, Alice
    measures m in that basis, draws her key bit a and publishes a XOR m;
    Bob decodes by XOR with his prepared bit. Only the forward line of
    `attack` is used: there is no quantum backward line.

    Args:
        config: Session configuration (variant must be BB84_OTP)
        rng: Session generator; defaults to one seeded with config.seed
        attack: Optional forward-line adversary
        progress: Show a tqdm progress bar

    Returns:
        Transcript with the same schema as the other variants

    Raises:
        LocusError: EveMeasures locus, or a strategy that only acts on the
            announced outcome
    """
    if config.variant is not ProtocolVariant.BB84_OTP:
        raise ValueError(f"run_bb84_otp_session needs variant bb84_otp, got {config.variant.value}")
    attack = attack or attack_none()
    attack.check_otp(config.locus is MeasurementLocus.EVE_MEASURES)
    protocol_rng, forward_rng, backward_rng, measure_rng = _streams(config, rng)
    attack.bind(forward_rng, backward_rng, measure_rng)
    logger.info(f"OTP session start: attack={attack.name} n={config.n_rounds} seed={config.seed}")

    rounds: List[RoundRecord] = []
    for index in tqdm(range(config.n_rounds), desc="rounds", disable=not progress):
        bob_state, ket = bob_prepare(protocol_rng)
        gate = BasisGate(bob_state.basis())
        state = attack.on_forward(ket.to_density())

        decision = alice_receive(state, protocol_rng, config)
        gate.mark_received()
        if decision.mode is Mode.CHECK:
            rounds.append(_check_record(index, bob_state, decision))
            continue

        m, _ = measure_projective(state, gate.release(), protocol_rng)
        key_bit = int(protocol_rng.integers(2))
        disclosed = bool(protocol_rng.random() < config.disclose_fraction)
        public = key_bit ^ m
        rounds.append(RoundRecord(
            index=index,
            bob_basis=bob_state.basis(),
            bob_bit=bob_state.bit(),
            mode=Mode.ENCODE,
            alice_key_bit=key_bit,
            bob_decoded_bit=bob_decode(bob_state.bit(), public),
            disclosed=disclosed,
            public_bit=public,
        ))
    attack.finish()

    transcript = Transcript.from_rounds(config, rounds, attack.name)
    _log_summary(transcript)
    return transcript


def _log_summary(transcript: Transcript):
    n_check = sum(1 for r in transcript.rounds if r.mode is Mode.CHECK)
    logger.info(f"Session done: {len(transcript.rounds)} rounds, {n_check} check, "
                f"{len(transcript.raw_key_rounds)} raw-key bits")
    if transcript.lost_rounds or transcript.double_clicks:
        logger.warning(f"Inconclusive detections: {transcript.lost_rounds} no-click, "
                       f"{transcript.double_clicks} double-click")
