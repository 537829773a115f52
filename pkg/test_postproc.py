#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Post-processing tests - Cascade reconciliation, Toeplitz hashing, distillation
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from src.errors import ProtocolAbort, ReconciliationError
from src.postproc import (
    ABORT_LENGTH,
    FinalKey,
    distill,
    final_length,
    initial_block_size,
    inject_errors,
    privacy_amplify,
    reconcile,
    toeplitz_hash,
    toeplitz_matrix,
    verification_tag,
)


def _random_key(n: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).integers(0, 2, size=n, dtype=np.uint8)


def test_initial_block_size():
    assert initial_block_size(0.0, 500) == 73
    assert initial_block_size(0.1, 500) == 8
    assert initial_block_size(0.9, 500) == 1
    assert initial_block_size(0.001, 1000) == 73
    assert initial_block_size(0.0, 40) == 40


def test_verification_tag():
    key = _random_key(256, 0)
    flipped = key.copy()
    flipped[17] ^= 1
    assert len(verification_tag(key)) == 8
    assert verification_tag(key) == verification_tag(key.copy())
    assert verification_tag(key) != verification_tag(flipped)
    assert verification_tag(np.zeros(1, dtype=np.uint8)) != verification_tag(np.zeros(2, dtype=np.uint8))


def test_identical_keys_leak_only_top_level_parities():
    key = _random_key(1000, 1)
    result = reconcile(key, key, np.random.default_rng(0), error_rate=0.05)
    assert result.verified
    assert result.corrections == 0
    assert result.block_sizes == (15, 30, 60, 120)
    assert result.leaked_bits == sum(math.ceil(1000 / size) for size in result.block_sizes)
    assert np.array_equal(result.corrected_key, key)


def test_single_error_is_corrected():
    alice = _random_key(1024, 2)
    bob = alice.copy()
    bob[500] ^= 1
    result = reconcile(alice, bob, np.random.default_rng(0), error_rate=0.01)
    assert result.verified
    assert result.corrections == 1
    assert np.array_equal(result.corrected_key, alice)
    top_level = sum(math.ceil(1024 / size) for size in result.block_sizes)
    assert result.leaked_bits > top_level
    assert bob[500] != alice[500]


def test_reconcile_does_not_modify_inputs():
    alice = _random_key(512, 3)
    bob = inject_errors(alice, 0.02, np.random.default_rng(1))
    before = bob.copy()
    reconcile(alice, bob, np.random.default_rng(0), error_rate=0.02)
    assert np.array_equal(bob, before)


def test_uncorrelated_keys_fail_verification():
    alice, bob = _random_key(1000, 4), _random_key(1000, 5)
    with pytest.raises(ReconciliationError) as info:
        reconcile(alice, bob, np.random.default_rng(0), error_rate=0.5, passes=1)
    assert info.value.result is not None
    assert not info.value.result.verified


def test_reconcile_length_mismatch():
    with pytest.raises(ValueError):
        reconcile(_random_key(10, 0), _random_key(11, 0), np.random.default_rng(0), 0.1)


def test_zero_error_estimate_still_corrects_several_errors():
    alice = _random_key(4000, 15)
    bob = alice.copy()
    bob[[10, 3000]] ^= 1
    result = reconcile(alice, bob, np.random.default_rng(0), error_rate=0.0)
    assert result.verified
    assert result.corrections == 2
    assert result.block_sizes[0] == 73
    assert np.array_equal(result.corrected_key, alice)


def test_distill_with_zero_error_estimate():
    alice = _random_key(4000, 16)
    bob = alice.copy()
    bob[[5, 1999, 3500]] ^= 1
    result = distill(alice, bob, xi=1.0, e=0.0, seed=3)
    assert result.reconciliation.corrections == 3
    assert np.array_equal(result.alice.bits, result.bob.bits)


def test_final_length():
    assert final_length(1000, 1.0, 100, 32) == 868
    assert final_length(1000, 0.5, 0, 0) == 0
    assert final_length(100, 1.0, 200, 32) == 0


def test_privacy_amplify_reference_values():
    key = _random_key(1000, 6)
    final = privacy_amplify(key, 1.0, ec_leak=100)
    assert final.length == 868 == final.bits.size
    assert final.accounting == {"n_raw": 1000, "ec_leak": 100, "pa_removed": 132, "margin": 32}
    assert not final.abort

    short = privacy_amplify(key[:20], 1.0, ec_leak=0)
    assert short.abort and short.reason == ABORT_LENGTH
    assert short.length == 0 and short.hex() == ""

    with pytest.raises(ValueError):
        privacy_amplify(key, 0.4, ec_leak=0)


def test_final_key_hex():
    key = FinalKey(np.array([1, 0, 1, 0, 0, 0, 0, 0, 1], dtype=np.uint8), 9)
    assert key.hex() == "a080"


def test_toeplitz_hash_matches_matrix_product():
    for n, m, seed in [(64, 16, 0), (100, 100, 3), (7, 30, 9), (1, 1, 2)]:
        key = _random_key(n, seed + 100)
        expected = toeplitz_matrix(n, m, seed).astype(np.int64) @ key.astype(np.int64) % 2
        assert np.array_equal(toeplitz_hash(key, m, seed), expected)


def test_toeplitz_matrix_structure():
    T = toeplitz_matrix(12, 5, 4)
    assert T.shape == (5, 12)
    for i in range(1, 5):
        for j in range(1, 12):
            assert T[i, j] == T[i - 1, j - 1]


def test_toeplitz_hash_is_linear():
    a, b = _random_key(300, 10), _random_key(300, 11)
    assert np.array_equal(toeplitz_hash(a ^ b, 120, 5), toeplitz_hash(a, 120, 5) ^ toeplitz_hash(b, 120, 5))
    assert np.array_equal(toeplitz_hash(a, 120, 5), toeplitz_hash(a, 120, 5))


def test_inject_errors():
    key = _random_key(1000, 12)
    noisy = inject_errors(key, 0.03, np.random.default_rng(0))
    assert int((noisy != key).sum()) == 30
    assert np.array_equal(inject_errors(key, 0.0, np.random.default_rng(0)), key)
    with pytest.raises(ValueError):
        inject_errors(key, 1.5, np.random.default_rng(0))


def test_distill_end_to_end():
    alice = _random_key(4096, 13)
    bob = inject_errors(alice, 0.03, np.random.default_rng(1))
    result = distill(alice, bob, xi=1.0, e=0.03, seed=7)
    assert result.reconciliation.verified
    assert result.reconciliation.corrections == 123
    assert np.array_equal(result.alice.bits, result.bob.bits)
    expected = math.floor(4096 - result.reconciliation.leaked_bits - 32)
    assert result.alice.length == expected > 0
    assert result.to_dict()["keys_match"] is True


def test_distill_aborts():
    key = _random_key(200, 14)
    with pytest.raises(ProtocolAbort):
        distill(key, key, xi=0.4, e=0.0, seed=0)
    with pytest.raises(ProtocolAbort) as info:
        distill(key[:30], key[:30], xi=1.0, e=0.0, seed=0)
    assert info.value.reason == ABORT_LENGTH
    assert info.value.report.alice.abort


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
