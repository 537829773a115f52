"""
Cascade error correction with parity-leak accounting.

Bob corrects his key towards Alice's. Every parity Alice discloses (a
block parity or a bisection query) counts as one leaked bit; the final
64-bit verification tag is reported separately.
"""

import hashlib
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from src.errors import ReconciliationError

logger = logging.getLogger(__name__)

BLOCK_CONSTANT = 0.73
# floor for block sizing; an estimate of 0 would leave one whole-key block per pass
MIN_ERROR_RATE = 0.01
DEFAULT_PASSES = 4
TAG_BITS = 64


@dataclass(frozen=True)
class ReconciliationResult:
    """
    Attributes:
        corrected_key: Bob's key after correction
        leaked_bits: Parities disclosed by Alice
        verified: Verification tags matched
        tag_bits: Size of the verification tag (not in leaked_bits)
        block_sizes: Top-level block size per pass
        corrections: Bits Bob flipped
    """
    corrected_key: np.ndarray
    leaked_bits: int
    verified: bool
    tag_bits: int = TAG_BITS
    block_sizes: Tuple[int, ...] = ()
    corrections: int = 0
    passes: int = DEFAULT_PASSES

    def to_dict(self) -> Dict:
        return {
            "n": int(self.corrected_key.size),
            "leaked_bits": self.leaked_bits,
            "verified": self.verified,
            "tag_bits": self.tag_bits,
            "block_sizes": list(self.block_sizes),
            "corrections": self.corrections,
            "passes": self.passes,
        }


def initial_block_size(error_rate: float, n: int) -> int:
    """ceil(0.73 / max(e, 0.01)), limited to [1, n]."""
    if n <= 0:
        return 1
    error_rate = max(error_rate, MIN_ERROR_RATE)
    return max(1, min(n, math.ceil(BLOCK_CONSTANT / error_rate)))


def verification_tag(key: np.ndarray) -> bytes:
    """64-bit BLAKE2b digest of the packed key and its length."""
    key = np.asarray(key, dtype=np.uint8)
    digest = hashlib.blake2b(digest_size=TAG_BITS // 8)
    digest.update(int(key.size).to_bytes(8, "big"))
    digest.update(np.packbits(key).tobytes())
    return digest.digest()


def _parity(bits: np.ndarray, indices: np.ndarray) -> int:
    return int(bits[indices].sum() % 2)


@dataclass
class _Pass:
    blocks: List[np.ndarray]
    block_of: np.ndarray
    alice_parities: List[int] = field(default_factory=list)


class _Cascade:
    """Bookkeeping for one reconciliation run."""

    def __init__(self, alice: np.ndarray, bob: np.ndarray):
        self.alice = alice
        self.bob = bob
        self.passes: List[_Pass] = []
        self.leaked = 0
        self.corrections = 0

    def add_pass(self, order: np.ndarray, size: int) -> _Pass:
        n = order.size
        blocks = [order[start:start + size] for start in range(0, n, size)]
        block_of = np.empty(n, dtype=np.int64)
        for b, idx in enumerate(blocks):
            block_of[idx] = b
        current = _Pass(blocks, block_of, [_parity(self.alice, idx) for idx in blocks])
        self.leaked += len(blocks)
        self.passes.append(current)
        return current

    def _odd(self, p: int, b: int) -> bool:
        stage = self.passes[p]
        return _parity(self.bob, stage.blocks[b]) != stage.alice_parities[b]

    def _bisect(self, indices: np.ndarray) -> int:
        """Locate one error in a block with odd error parity."""
        while indices.size > 1:
            split = (indices.size + 1) // 2
            left, right = indices[:split], indices[split:]
            self.leaked += 1
            if _parity(self.bob, left) != _parity(self.alice, left):
                indices = left
            else:
                indices = right
        return int(indices[0])

    def correct(self, p: int):
        """Fix every odd block of pass p and cascade into earlier passes."""
        queue = [(p, b) for b in range(len(self.passes[p].blocks)) if self._odd(p, b)]
        while queue:
            q, b = queue.pop()
            if not self._odd(q, b):
                continue
            position = self._bisect(self.passes[q].blocks[b])
            self.bob[position] ^= 1
            self.corrections += 1
            for r, stage in enumerate(self.passes):
                if r != q:
                    rb = int(stage.block_of[position])
                    if self._odd(r, rb):
                        queue.append((r, rb))


def reconcile(alice_key, bob_key, rng: np.random.Generator, error_rate: float,
              passes: int = DEFAULT_PASSES) -> ReconciliationResult:
    """
    Correct Bob's key with Cascade and verify it against Alice's by tag.

    Pass 1 uses the identity order with block size ceil(0.73 / e), with e
    floored at 0.01; each later pass shuffles with `rng` and doubles the block size.

    Args:
        alice_key: Alice's bits
        bob_key: Bob's bits (same length)
        rng: Generator for the pass permutations
        error_rate: Estimated error rate e
        passes: Number of passes

    Returns:
        ReconciliationResult with verified=True

    Raises:
        ValueError: Keys of different lengths
        ReconciliationError: Tags still disagree after the last pass
    """
    alice = np.asarray(alice_key, dtype=np.uint8)
    bob = np.array(bob_key, dtype=np.uint8, copy=True)
    if alice.shape != bob.shape:
        raise ValueError(f"Key lengths differ: {alice.size} vs {bob.size}")
    n = alice.size

    cascade = _Cascade(alice, bob)
    sizes = []
    size = initial_block_size(error_rate, n)
    for p in range(passes if n else 0):
        order = np.arange(n) if p == 0 else rng.permutation(n)
        sizes.append(min(size, n))
        cascade.add_pass(order, sizes[-1])
        cascade.correct(p)
        logger.debug(f"Cascade pass {p + 1}: block={sizes[-1]} leaked={cascade.leaked} "
                     f"corrections={cascade.corrections}")
        size *= 2

    corrected = cascade.bob
    corrected.flags.writeable = False
    verified = verification_tag(alice) == verification_tag(corrected)
    result = ReconciliationResult(
        corrected_key=corrected,
        leaked_bits=cascade.leaked,
        verified=verified,
        block_sizes=tuple(sizes),
        corrections=cascade.corrections,
        passes=passes,
    )
    if not verified:
        logger.warning(f"Reconciliation failed: tags differ after {passes} passes")
        raise ReconciliationError(f"Verification tags differ after {passes} passes", result)
    logger.info(f"Reconciled {n} bits: {result.corrections} corrections, {result.leaked_bits} bits leaked")
    return result
