"""
Asymptotic key rate r = 1 - h(xi) - h(e) and the abort rule.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from src.qmath import binary_entropy

logger = logging.getLogger(__name__)

XI_THRESHOLD = 0.5
XI_SLACK = 1e-9

ABORT_XI = "xi_below_threshold"
ABORT_RATE = "non_positive_rate"


@dataclass(frozen=True)
class KeyRateReport:
    """
    Outcome of the rate computation.

    Attributes:
        xi: Fidelity test value as supplied
        e: Error rate
        r: 1 - h(xi) - h(e), in bits per raw-key bit
        r_pa: Privacy-amplification rate from the density-matrix path, if computed
        abort: True when xi < 1/2 or r <= 0
        reasons: Every abort reason that applies
    """
    xi: float
    e: float
    r: float
    r_pa: Optional[float] = None
    abort: bool = False
    reasons: Tuple[str, ...] = ()

    @property
    def reason(self) -> str:
        return "; ".join(self.reasons)

    def to_dict(self) -> Dict:
        return {
            "xi": self.xi, "e": self.e, "r": self.r, "r_pa": self.r_pa,
            "abort": self.abort, "reason": self.reason, "reasons": list(self.reasons),
        }


def key_rate(xi: float, e: float, r_pa: Optional[float] = None) -> KeyRateReport:
    """
    Evaluate r = 1 - h(xi) - h(e) and decide whether to abort.

    xi comes from estimated fidelities and may exceed 1 by sampling noise;
    it is clamped into [0, 1] before h is applied (a WARNING is logged
    above 1). Both abort reasons are reported when both apply.

    Args:
        xi: Fidelity test value, in [-1, 1 + 1e-9]
        e: Error rate in [0, 1]
        r_pa: Optional density-matrix rate to attach

    Returns:
        KeyRateReport

    Raises:
        ValueError: Arguments outside their domains
    """
    xi, e = float(xi), float(e)
    if not 0.0 <= e <= 1.0:
        raise ValueError(f"Error rate must lie in [0, 1], got {e}")
    if not -1.0 <= xi <= 1.0 + XI_SLACK:
        raise ValueError(f"xi must lie in [-1, 1], got {xi}")
    if xi > 1.0:
        logger.warning(f"xi={xi!r} above 1, clamped")

    clamped = min(max(xi, 0.0), 1.0)
    r = 1.0 - binary_entropy(clamped) - binary_entropy(e)

    reasons = []
    if xi < XI_THRESHOLD:
        reasons.append(ABORT_XI)
    if r <= 0.0:
        reasons.append(ABORT_RATE)
    if reasons:
        logger.info(f"Abort: xi={xi:.4f} e={e:.4f} r={r:.4f} ({', '.join(reasons)})")
    return KeyRateReport(xi=xi, e=e, r=r, r_pa=r_pa, abort=bool(reasons), reasons=tuple(reasons))
