"""
Attack strategies seen by the session driver.

A strategy bundles a forward-line attack, a backward-line attack and an
announcer. The session binds it to its own generators, then per round calls
on_forward, on_backward and (EveMeasures locus only, after Bob released his
basis) announce. Records from both lines persist in `memory` across rounds.
"""

import logging
from typing import Hashable, List, Optional, Tuple

import numpy as np

from src.errors import LocusError
from src.qmath import Basis, DensityMatrix
from .announcers import Announcer, EveView, FakedStatesAnnouncer, HonestAnnouncer, resolve_rule
from .detectors import ClickOutcome
from .lines import Depolarize, InterceptPolicy, InterceptResend, LineAttack, Passthrough, UnitaryAncilla

logger = logging.getLogger(__name__)


class AttackStrategy:
    """
    Eve's behavior on both lines and on the announcement channel.

    Args:
        name: Label used in reports
        forward: Attack on line B-to-A
        backward: Attack on line A-to-B
        announcer: Outcome announcer (honest measurement when omitted)
        eve_locus_only: Strategy is only meaningful when Eve measures
    """

    def __init__(
        self,
        name: str,
        forward: Optional[LineAttack] = None,
        backward: Optional[LineAttack] = None,
        announcer: Optional[Announcer] = None,
        eve_locus_only: bool = False,
    ):
        self.name = name
        self.forward = forward or Passthrough()
        self.backward = backward or Passthrough()
        self.announcer = announcer or HonestAnnouncer()
        self.eve_locus_only = eve_locus_only
        self.memory: List[Tuple[Optional[Hashable], ...]] = []
        self._round_records: List[Optional[Hashable]] = []
        self._held: Optional[DensityMatrix] = None
        self._rngs: Optional[Tuple[np.random.Generator, ...]] = None

    @property
    def quantum_memory(self) -> bool:
        return self.forward.quantum_memory or self.backward.quantum_memory

    def bind(self, forward_rng: np.random.Generator, backward_rng: np.random.Generator,
             measure_rng: np.random.Generator):
        """Attach the session's generators and clear memory."""
        self._rngs = (forward_rng, backward_rng, measure_rng)
        self.memory = []
        self._round_records = []
        self._held = None

    def _rng(self, index: int) -> np.random.Generator:
        if self._rngs is None:
            raise RuntimeError(f"Strategy '{self.name}' used before bind()")
        return self._rngs[index]

    def check_locus(self, eve_measures: bool):
        if self.eve_locus_only and not eve_measures:
            raise LocusError(f"Strategy '{self.name}' requires the EveMeasures locus")

    def check_otp(self, eve_measures: bool):
        """bb84_otp has no quantum line A-to-B and no announced outcome."""
        if eve_measures:
            raise LocusError("bb84_otp has no announced outcome; the EveMeasures locus does not apply")
        if self.eve_locus_only:
            raise LocusError(f"Strategy '{self.name}' only acts on the announced outcome, which bb84_otp lacks")
        if not self.backward.identity:
            logger.warning(f"Backward-line attack of '{self.name}' has no effect on bb84_otp")

    def on_forward(self, state: DensityMatrix) -> DensityMatrix:
        """Line B-to-A: act on the qubit Bob emitted."""
        if self._round_records:
            self.memory.append(tuple(self._round_records))
        self._round_records = []
        self._held = None
        out, record = self.forward.apply(state, self._rng(0))
        self._round_records.append(record)
        return out

    def on_backward(self, state: DensityMatrix) -> DensityMatrix:
        """Line A-to-B: act on the encoded system Alice returned."""
        out, record = self.backward.apply(state, self._rng(1))
        self._round_records.append(record)
        self._held = out
        return out

    def announce(self, basis: Basis) -> ClickOutcome:
        """Report an outcome for the held system after Bob released `basis`."""
        if self._held is None:
            raise RuntimeError("announce() called before the encoded system reached Eve")
        view = EveView(self._held, Basis(basis), tuple(self._round_records), self._rng(2))
        return self.announcer.announce(view)

    def finish(self):
        """Flush the last round's records into memory."""
        if self._round_records:
            self.memory.append(tuple(self._round_records))
        self._round_records = []


def attack_none() -> AttackStrategy:
    """Identity on both lines; honest measurement if asked to announce."""
    return AttackStrategy("none")


def attack_intercept_resend(basis_policy=InterceptPolicy.RANDOM_ZX, fraction: float = 1.0) -> AttackStrategy:
    """Intercept-resend on the forward line."""
    line = InterceptResend(basis_policy, fraction)
    name = line.name if fraction == 1.0 else f"{line.name}@{fraction}"
    return AttackStrategy(name, forward=line)


def attack_unitary_ancilla(U_BE: np.ndarray, ancilla_dim: int, name: str = "unitary_ancilla") -> AttackStrategy:
    """Joint unitary with a fresh ancilla on the forward line."""
    return AttackStrategy(name, forward=UnitaryAncilla(U_BE, ancilla_dim, name))


def attack_depolarize(p_forward: float = 0.0, p_backward: float = 0.0) -> AttackStrategy:
    """Depolarizing noise on either line."""
    return AttackStrategy(
        f"depolarize[{p_forward},{p_backward}]",
        forward=Depolarize(p_forward),
        backward=Depolarize(p_backward),
    )


def eve_measure_in_bob_basis() -> AttackStrategy:
    """Eve measures Alice's qubit in Bob's released basis and reports honestly."""
    return AttackStrategy("eve_measure_in_bob_basis", announcer=HonestAnnouncer(), eve_locus_only=True)


def eve_faked_states(strategy) -> AttackStrategy:
    """
    Eve announces outcomes chosen by a faked-state rule.

    Args:
        strategy: Registry name, FakedStateRule, or callable EveView -> ClickOutcome
    """
    announcer = FakedStatesAnnouncer(resolve_rule(strategy))
    return AttackStrategy(announcer.name, announcer=announcer, eve_locus_only=True)


def compose_attacks(line_strategy: AttackStrategy, announcer_strategy: AttackStrategy) -> AttackStrategy:
    """
    Take the line attacks of one strategy and the announcer of another.

    Args:
        line_strategy: Supplies forward and backward behavior
        announcer_strategy: Supplies the announcement behavior

    Returns:
        New, unbound strategy
    """
    return AttackStrategy(
        f"{line_strategy.name}+{announcer_strategy.name}",
        forward=line_strategy.forward,
        backward=line_strategy.backward,
        announcer=announcer_strategy.announcer,
        eve_locus_only=announcer_strategy.eve_locus_only,
    )
