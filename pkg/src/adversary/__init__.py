"""
Adversary module - line attacks, announcers, detector models
"""

from .detectors import (
    BLINDING_OVERRIDES,
    IDEAL_DETECTOR,
    ClickOutcome,
    DetectorModel,
    detector_click,
    detector_distribution,
)
from .lines import Branch, Depolarize, InterceptPolicy, InterceptResend, LineAttack, Passthrough, UnitaryAncilla
from .announcers import FAKED_STATE_RULES, Announcer, EveView, FakedStateRule, HonestAnnouncer
from .strategies import (
    AttackStrategy,
    attack_depolarize,
    attack_intercept_resend,
    attack_none,
    attack_unitary_ancilla,
    compose_attacks,
    eve_faked_states,
    eve_measure_in_bob_basis,
)
from .registry import ANNOUNCER_NAMES, ATTACK_FACTORIES, CNOT, FORWARD_SUITE, build_announcer, build_attack

__all__ = [
    'BLINDING_OVERRIDES', 'IDEAL_DETECTOR', 'ClickOutcome', 'DetectorModel',
    'detector_click', 'detector_distribution',
    'Branch', 'Depolarize', 'InterceptPolicy', 'InterceptResend', 'LineAttack', 'Passthrough',
    'UnitaryAncilla',
    'FAKED_STATE_RULES', 'Announcer', 'EveView', 'FakedStateRule', 'HonestAnnouncer',
    'AttackStrategy', 'attack_depolarize', 'attack_intercept_resend', 'attack_none',
    'attack_unitary_ancilla', 'compose_attacks', 'eve_faked_states', 'eve_measure_in_bob_basis',
    'ANNOUNCER_NAMES', 'ATTACK_FACTORIES', 'CNOT', 'FORWARD_SUITE', 'build_announcer', 'build_attack',
]
