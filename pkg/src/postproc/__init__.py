"""
Post-processing module - error correction and privacy amplification
"""

from .reconciliation import (
    DEFAULT_PASSES,
    TAG_BITS,
    ReconciliationResult,
    initial_block_size,
    reconcile,
    verification_tag,
)
from .privacy_amplification import (
    ABORT_LENGTH,
    DEFAULT_MARGIN,
    DistillResult,
    FinalKey,
    distill,
    final_length,
    inject_errors,
    privacy_amplify,
    toeplitz_hash,
    toeplitz_matrix,
    toeplitz_seed_bits,
)

__all__ = [
    'DEFAULT_PASSES', 'TAG_BITS', 'ReconciliationResult', 'initial_block_size', 'reconcile',
    'verification_tag',
    'ABORT_LENGTH', 'DEFAULT_MARGIN', 'DistillResult', 'FinalKey', 'distill', 'final_length',
    'inject_errors', 'privacy_amplify', 'toeplitz_hash', 'toeplitz_matrix', 'toeplitz_seed_bits',
]
