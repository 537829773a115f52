"""
Privacy amplification by seeded Toeplitz hashing over GF(2), plus the
error-injection helper and the reconcile-then-hash pipeline.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.linalg import toeplitz

from src.errors import ProtocolAbort
from src.qmath import binary_entropy
from .reconciliation import DEFAULT_PASSES, ReconciliationResult, reconcile

logger = logging.getLogger(__name__)

DEFAULT_MARGIN = 32
ABORT_LENGTH = "final_length_non_positive"


@dataclass(frozen=True)
class FinalKey:
    """
    Hashed key with its length accounting.

    accounting holds n_raw, ec_leak, pa_removed (= n_raw - length) and margin.
    """
    bits: np.ndarray
    length: int
    accounting: Dict[str, int] = field(default_factory=dict)
    abort: bool = False
    reason: str = ""

    def hex(self) -> str:
        """Lowercase hex of the bits, zero-padded to whole bytes."""
        return np.packbits(np.asarray(self.bits, dtype=np.uint8)).tobytes().hex()

    def to_dict(self) -> Dict:
        return {"length": self.length, "accounting": dict(self.accounting),
                "abort": self.abort, "reason": self.reason}


def final_length(n_raw: int, xi: float, ec_leak: int, margin: int = DEFAULT_MARGIN) -> int:
    """max(0, floor(n_raw * (1 - h(xi)) - ec_leak - margin))"""
    xi = min(max(float(xi), 0.0), 1.0)
    return max(0, math.floor(n_raw * (1.0 - binary_entropy(xi)) - ec_leak - margin))


def toeplitz_seed_bits(n: int, m: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    First column (length m) and first row (length n) of the hash matrix.

    The generator seeded with `seed` draws n + m - 1 bits; the column takes
    the first m and the row continues from the shared corner.
    """
    bits = np.random.default_rng(seed).integers(0, 2, size=n + m - 1, dtype=np.uint8)
    column = bits[:m]
    row = np.concatenate([column[:1], bits[m:m + n - 1]])
    return column, row


def toeplitz_matrix(n: int, m: int, seed: int) -> np.ndarray:
    """m x n binary Toeplitz matrix for the seed."""
    column, row = toeplitz_seed_bits(n, m, seed)
    return toeplitz(column, row).astype(np.uint8)


def toeplitz_hash(key, m: int, seed: int) -> np.ndarray:
    """
    T(seed) . key mod 2, evaluated as a convolution of the matrix diagonals.

    Returns:
        m output bits (uint8)
    """
    key = np.asarray(key, dtype=np.int64)
    n = key.size
    if m <= 0 or n == 0:
        return np.zeros(0, dtype=np.uint8)
    column, row = toeplitz_seed_bits(n, m, seed)
    # diagonal t[k - (n-1)] for k = 0 .. n+m-2
    diagonals = np.concatenate([row[:0:-1], column]).astype(np.int64)
    full = np.convolve(diagonals, key)
    return (full[n - 1:n - 1 + m] % 2).astype(np.uint8)


def privacy_amplify(key, xi: float, ec_leak: int, margin: int = DEFAULT_MARGIN,
                    seed: int = 0) -> FinalKey:
    """
    Shrink a reconciled key to floor(n (1 - h(xi)) - ec_leak - margin) bits.

    Args:
        key: Reconciled bits
        xi: Fidelity test value (>= 1/2)
        ec_leak: Bits disclosed during error correction
        margin: Security margin in bits
        seed: Toeplitz seed

    Returns:
        FinalKey; empty with abort=True when the length is not positive

    Raises:
        ValueError: xi below 1/2
    """
    if xi < 0.5:
        raise ValueError(f"Privacy amplification needs xi >= 1/2, got {xi}")
    key = np.asarray(key, dtype=np.uint8)
    n = key.size
    length = final_length(n, xi, ec_leak, margin)
    accounting = {"n_raw": n, "ec_leak": int(ec_leak), "pa_removed": n - length, "margin": int(margin)}
    if length <= 0:
        logger.warning(f"No key left after privacy amplification (n={n}, xi={xi:.4f}, ec_leak={ec_leak})")
        return FinalKey(np.zeros(0, dtype=np.uint8), 0, accounting, abort=True, reason=ABORT_LENGTH)

    bits = toeplitz_hash(key, length, seed)
    bits.flags.writeable = False
    logger.info(f"Privacy amplification: {n} -> {length} bits")
    return FinalKey(bits, length, accounting)


def inject_errors(key, rate: float, rng: np.random.Generator) -> np.ndarray:
    """Flip round(rate * n) distinct positions chosen by `rng`."""
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"Error rate must lie in [0, 1], got {rate}")
    noisy = np.array(key, dtype=np.uint8, copy=True)
    count = int(round(rate * noisy.size))
    if count:
        noisy[rng.choice(noisy.size, size=count, replace=False)] ^= 1
    return noisy


@dataclass(frozen=True)
class DistillResult:
    alice: FinalKey
    bob: FinalKey
    reconciliation: ReconciliationResult
    seed: int

    def to_dict(self) -> Dict:
        return {
            "seed": self.seed,
            "reconciliation": self.reconciliation.to_dict(),
            "final_key": self.alice.to_dict(),
            "keys_match": bool(np.array_equal(self.alice.bits, self.bob.bits)),
        }


def distill(alice_key, bob_key, xi: float, e: float, seed: int,
            margin: int = DEFAULT_MARGIN, passes: int = DEFAULT_PASSES,
            pa_seed: Optional[int] = None) -> DistillResult:
    """
    Reconcile, then hash both keys with the same Toeplitz matrix.

    Args:
        alice_key, bob_key: Raw keys
        xi: Fidelity test value
        e: Estimated error rate (sets the first Cascade block size)
        seed: Seed of the Cascade permutations and, by default, the Toeplitz matrix
        margin: Security margin in bits
        passes: Cascade passes
        pa_seed: Separate Toeplitz seed

    Returns:
        DistillResult

    Raises:
        ProtocolAbort: xi below 1/2 or no key left after hashing
        ReconciliationError: Verification tags disagree
    """
    if xi < 0.5:
        raise ProtocolAbort(f"xi={xi:.4f} below 1/2, no post-processing")
    rec = reconcile(alice_key, bob_key, np.random.default_rng(seed), e, passes)
    pa_seed = seed if pa_seed is None else pa_seed
    alice_final = privacy_amplify(alice_key, xi, rec.leaked_bits, margin, pa_seed)
    bob_final = privacy_amplify(rec.corrected_key, xi, rec.leaked_bits, margin, pa_seed)
    result = DistillResult(alice_final, bob_final, rec, seed)
    if alice_final.abort:
        raise ProtocolAbort(alice_final.reason, result)
    return result
