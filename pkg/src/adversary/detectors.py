"""
Bob-side single-photon detector models.

A pair of detectors sits behind the basis choice; efficiency thinning, dark
counts and blinding turn a projective outcome into a click pattern.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Optional

import numpy as np

from src.errors import ConfigError
from src.qmath import Basis, DensityMatrix, basis_kets, born_probabilities, measure_projective

logger = logging.getLogger(__name__)


class ClickOutcome(str, Enum):
    """Click pattern of the two detectors"""
    BIT0 = "bit0"
    BIT1 = "bit1"
    NO_CLICK = "no_click"
    DOUBLE_CLICK = "double_click"

    @classmethod
    def from_bit(cls, bit: int) -> "ClickOutcome":
        return cls.BIT0 if int(bit) == 0 else cls.BIT1

    def bit(self) -> Optional[int]:
        """Conclusive bit, or None for no-click/double-click."""
        if self is ClickOutcome.BIT0:
            return 0
        if self is ClickOutcome.BIT1:
            return 1
        return None


# Outcomes a blinding attacker can force on a blinded detector pair.
BLINDING_OVERRIDES: Dict[str, Callable[[Basis], ClickOutcome]] = {
    "force_bit0": lambda basis: ClickOutcome.BIT0,
    "force_bit1": lambda basis: ClickOutcome.BIT1,
    "no_click": lambda basis: ClickOutcome.NO_CLICK,
}


@dataclass(frozen=True)
class DetectorModel:
    """
    Detector pair parameters.

    Attributes:
        eta0: Efficiency of the bit-0 detector
        eta1: Efficiency of the bit-1 detector
        dark_rate: Per-detector dark-count probability per round
        blinded: Whether the pair is blinded (outcomes forced by `override`)
        override: Name in BLINDING_OVERRIDES, required when blinded
    """
    eta0: float = 1.0
    eta1: float = 1.0
    dark_rate: float = 0.0
    blinded: bool = False
    override: Optional[str] = None

    def __post_init__(self):
        for name, value in (("eta0", self.eta0), ("eta1", self.eta1)):
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {value}")
        if not 0.0 <= self.dark_rate < 1.0:
            raise ConfigError(f"dark_rate must lie in [0, 1), got {self.dark_rate}")
        if self.blinded and self.override not in BLINDING_OVERRIDES:
            raise ConfigError(
                f"Unknown blinding override '{self.override}'. "
                f"Known: {sorted(BLINDING_OVERRIDES)}")


IDEAL_DETECTOR = DetectorModel()


def _pattern(click0: bool, click1: bool) -> ClickOutcome:
    if click0 and click1:
        return ClickOutcome.DOUBLE_CLICK
    if click0:
        return ClickOutcome.BIT0
    if click1:
        return ClickOutcome.BIT1
    return ClickOutcome.NO_CLICK


def detector_click(model: DetectorModel, state: DensityMatrix, basis: Basis,
                   rng: np.random.Generator) -> ClickOutcome:
    """
    Sample the click pattern for the qubit factor of `state` measured in `basis`.

    The projective outcome is thinned by that detector's efficiency, then each
    detector fires a dark count independently. An ideal model draws exactly
    what `measure_projective` draws.

    Args:
        model: Detector parameters
        state: Returned system, qubit first
        basis: Bob's measurement basis
        rng: Measurement generator

    Returns:
        Click outcome
    """
    if model.blinded:
        return BLINDING_OVERRIDES[model.override](basis)

    outcome, _ = measure_projective(state, basis, rng)
    clicks = [False, False]
    efficiency = (model.eta0, model.eta1)[outcome]
    clicks[outcome] = efficiency >= 1.0 or rng.random() < efficiency
    if model.dark_rate > 0.0:
        for detector in (0, 1):
            if rng.random() < model.dark_rate:
                clicks[detector] = True
    return _pattern(*clicks)


def detector_distribution(model: DetectorModel, state: DensityMatrix,
                          basis: Basis) -> Dict[ClickOutcome, float]:
    """
    Exact click-pattern distribution matching `detector_click`.

    Returns:
        Probability per ClickOutcome (all four keys present)
    """
    result = {outcome: 0.0 for outcome in ClickOutcome}
    if model.blinded:
        result[BLINDING_OVERRIDES[model.override](basis)] = 1.0
        return result

    probs = born_probabilities(state, basis_kets(basis))
    dark = model.dark_rate
    for outcome, p in enumerate(probs):
        efficiency = (model.eta0, model.eta1)[outcome]
        fired = 1.0 - (1.0 - efficiency) * (1.0 - dark)
        p_clicks = [dark, dark]
        p_clicks[outcome] = fired
        for c0 in (False, True):
            for c1 in (False, True):
                weight = (p_clicks[0] if c0 else 1 - p_clicks[0]) * (p_clicks[1] if c1 else 1 - p_clicks[1])
                result[_pattern(c0, c1)] += p * weight
    return result
