"""
Exception hierarchy shared by all modules.
"""

from typing import Any, Optional


class DqkdError(Exception):
    """Base class for toolkit errors."""


class InvalidStateError(DqkdError, ValueError):
    """A ket or density matrix violates its invariants."""


class DimensionMismatchError(DqkdError, ValueError):
    """Operator and state dimensions do not agree."""


class NonUnitaryError(DqkdError, ValueError):
    """A matrix expected to be unitary is not."""


class ConfigError(DqkdError, ValueError):
    """Invalid session or run configuration."""


class OrderingViolationError(DqkdError, RuntimeError):
    """Bob's basis was requested before Alice received the forward qubit."""


class LocusError(DqkdError, ValueError):
    """An attack strategy is incompatible with the measurement locus."""


class InsufficientDataError(DqkdError, ValueError):
    """A transcript lacks the rounds needed for an estimate."""


class NotEnumerableError(DqkdError, TypeError):
    """A strategy has no exact (enumerable) description."""


class ReconciliationError(DqkdError):
    """Verification tags disagree after all reconciliation passes."""

    def __init__(self, message: str, result: Optional[Any] = None):
        super().__init__(message)
        self.result = result


class ProtocolAbort(DqkdError):
    """The protocol aborted: xi below threshold or non-positive rate."""

    def __init__(self, reason: str, report: Optional[Any] = None):
        super().__init__(reason)
        self.reason = reason
        self.report = report
