"""
Outcome announcers: Eve in the place of Bob's measurement device.

An announcer only ever sees an EveView: the system she holds, the basis Bob
released, her own records and her own generator. Bob's preparation and
Alice's operation are not part of the view.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, Optional, Tuple

import numpy as np

from src.errors import ConfigError, NotEnumerableError
from src.qmath import Basis, DensityMatrix, basis_kets, born_probabilities, measure_projective
from .detectors import ClickOutcome

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EveView:
    """Everything available to Eve when she announces a round's outcome"""
    state: DensityMatrix
    basis: Basis
    records: Tuple[Optional[Hashable], ...]
    rng: np.random.Generator


Distribution = Dict[ClickOutcome, float]


def _bit_distribution(p0: float) -> Distribution:
    return {ClickOutcome.BIT0: p0, ClickOutcome.BIT1: 1.0 - p0}


class Announcer(ABC):
    """Turns Eve's view into the outcome Bob is told"""

    name = "announcer"

    @abstractmethod
    def announce(self, view: EveView) -> ClickOutcome:
        """Sample the announced outcome."""

    def distribution(self, state: DensityMatrix, basis: Basis) -> Distribution:
        """Exact announced-outcome distribution for a held system and basis."""
        raise NotEnumerableError(f"Announcer '{self.name}' has no exact distribution")


class HonestAnnouncer(Announcer):
    """Measure the held qubit in the released basis and report it."""

    name = "measure_in_bob_basis"

    def announce(self, view):
        bit, _ = measure_projective(view.state, view.basis, view.rng)
        return ClickOutcome.from_bit(bit)

    def distribution(self, state, basis):
        return _bit_distribution(born_probabilities(state, basis_kets(basis))[0])


@dataclass(frozen=True)
class FakedStateRule:
    """Named faked-state strategy with sampling and exact paths"""
    name: str
    sample: Callable[[EveView], ClickOutcome]
    exact: Optional[Callable[[DensityMatrix, Basis], Distribution]] = None


def _measure_sample(view: EveView) -> ClickOutcome:
    bit, _ = measure_projective(view.state, view.basis, view.rng)
    return ClickOutcome.from_bit(bit)


def _wrong_basis_sample(view: EveView) -> ClickOutcome:
    bit, _ = measure_projective(view.state, view.basis.other(), view.rng)
    return ClickOutcome.from_bit(bit)


FAKED_STATE_RULES: Dict[str, FakedStateRule] = {
    rule.name: rule for rule in (
        FakedStateRule(
            "measure_announced_basis", _measure_sample,
            lambda state, basis: _bit_distribution(born_probabilities(state, basis_kets(basis))[0])),
        FakedStateRule(
            "always_bit0", lambda view: ClickOutcome.BIT0,
            lambda state, basis: {ClickOutcome.BIT0: 1.0}),
        FakedStateRule(
            "wrong_basis", _wrong_basis_sample,
            lambda state, basis: _bit_distribution(
                born_probabilities(state, basis_kets(basis.other()))[0])),
        FakedStateRule(
            "random_bit", lambda view: ClickOutcome.from_bit(int(view.rng.integers(2))),
            lambda state, basis: _bit_distribution(0.5)),
    )
}


class FakedStatesAnnouncer(Announcer):
    """Announce whatever a faked-state rule dictates."""

    def __init__(self, rule: FakedStateRule):
        self.rule = rule
        self.name = f"faked_states[{rule.name}]"

    def announce(self, view):
        outcome = self.rule.sample(view)
        if not isinstance(outcome, ClickOutcome):
            raise TypeError(f"Rule '{self.rule.name}' returned {outcome!r}, expected ClickOutcome")
        return outcome

    def distribution(self, state, basis):
        if self.rule.exact is None:
            return super().distribution(state, basis)
        return self.rule.exact(state, basis)


def resolve_rule(rule) -> FakedStateRule:
    """
    Look up a faked-state rule by name, or wrap a callable.

    Args:
        rule: Registry name, FakedStateRule, or callable EveView -> ClickOutcome

    Returns:
        FakedStateRule (callables get no exact path)
    """
    if isinstance(rule, FakedStateRule):
        return rule
    if isinstance(rule, str):
        if rule not in FAKED_STATE_RULES:
            raise ConfigError(
                f"Unknown faked-state rule '{rule}'. Known: {sorted(FAKED_STATE_RULES)}")
        return FAKED_STATE_RULES[rule]
    if callable(rule):
        return FakedStateRule(getattr(rule, "__name__", "custom"), rule)
    raise ConfigError(f"Cannot build a faked-state rule from {rule!r}")
