#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Analysis tests - channel statistics, key rate, density-matrix checks, enumeration
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from src.adversary import (
    ANNOUNCER_NAMES,
    CNOT,
    ClickOutcome,
    InterceptPolicy,
    attack_intercept_resend,
    build_announcer,
    build_attack,
    eve_faked_states,
)
from src.analysis import (
    ABORT_RATE,
    ABORT_XI,
    build_rho_abe,
    compare_protocols_bc,
    ensemble_deviation,
    estimate_stats,
    eve_information,
    exact_forward_ensemble,
    exact_stats,
    forward_ensemble,
    key_rate,
    mdi_trial,
    pa_rate,
    sweep_random_unitaries,
    verify_basis_independence,
    xi_from_fidelities,
)
from src.errors import DimensionMismatchError, InsufficientDataError, NotEnumerableError
from src.protocol import MeasurementLocus, ProtocolVariant, SessionConfig, run_session
from src.qmath import binary_entropy, random_unitary


def test_xi_formula():
    assert xi_from_fidelities(1, 1, 1, 1) == 1.0
    assert xi_from_fidelities(0.75, 0.75, 0.75, 0.75) == 0.5


def test_estimate_stats_noiseless():
    stats = estimate_stats(run_session(SessionConfig(n_rounds=2000, seed=3)))
    assert (stats.f0, stats.f1, stats.fplus, stats.fminus) == (1.0, 1.0, 1.0, 1.0)
    assert stats.xi == 1.0
    assert stats.e == 0.0
    assert not stats.exact
    assert set(stats.n_check_used) == {"0", "1", "+", "-"}
    assert stats.n_disclosed > 0


def test_estimate_stats_intercept_resend():
    transcript = run_session(SessionConfig(n_rounds=8000, seed=8), attack=attack_intercept_resend())
    stats = estimate_stats(transcript)
    n_checks = sum(stats.n_check_used.values())
    assert abs(stats.xi - 0.5) <= 4 * np.sqrt(0.1875 / (n_checks / 4))
    assert abs(stats.e - 0.25) <= 4 * np.sqrt(0.1875 / stats.n_disclosed)


def test_estimate_stats_insufficient_data():
    no_checks = run_session(SessionConfig(n_rounds=100, p_check=0.0, allow_degenerate=True))
    with pytest.raises(InsufficientDataError):
        estimate_stats(no_checks)
    no_encode = run_session(SessionConfig(n_rounds=100, p_check=1.0, allow_degenerate=True))
    with pytest.raises(InsufficientDataError):
        estimate_stats(no_encode)


def test_key_rate_reference_values():
    report = key_rate(1.0, 0.0)
    assert report.r == 1.0 and not report.abort and report.reasons == ()

    report = key_rate(0.9, 0.05)
    assert report.r == pytest.approx(1 - binary_entropy(0.9) - binary_entropy(0.05))
    assert not report.abort

    report = key_rate(0.5, 0.0)
    assert report.r == pytest.approx(0.0)
    assert report.abort and report.reasons == (ABORT_RATE,)

    report = key_rate(0.4, 0.3)
    assert report.abort
    assert report.reasons == (ABORT_XI, ABORT_RATE)
    assert report.reason == f"{ABORT_XI}; {ABORT_RATE}"


def test_key_rate_domain():
    assert key_rate(1.0 + 1e-10, 0.0).r == 1.0
    with pytest.raises(ValueError):
        key_rate(1.1, 0.0)
    with pytest.raises(ValueError):
        key_rate(0.9, -0.1)
    with pytest.raises(ValueError):
        key_rate(0.9, 1.5)


def test_key_rate_monotonic():
    es = np.linspace(0.0, 0.5, 21)
    rates = [key_rate(0.95, e).r for e in es]
    assert all(a >= b for a, b in zip(rates, rates[1:]))
    xis = np.linspace(0.5, 1.0, 21)
    rates = [key_rate(xi, 0.02).r for xi in xis]
    assert all(a <= b for a, b in zip(rates, rates[1:]))


def test_rho_abe_shape_and_validation():
    rho = build_rho_abe(np.eye(4), 2)
    assert rho.dims == (2, 2, 2)
    with pytest.raises(DimensionMismatchError):
        build_rho_abe(np.eye(4), 3)


def test_pa_rate_limits():
    assert pa_rate(build_rho_abe(np.eye(2), 1)) == pytest.approx(1.0, abs=1e-12)
    assert pa_rate(build_rho_abe(np.eye(8), 4)) == pytest.approx(1.0, abs=1e-12)
    assert pa_rate(build_rho_abe(CNOT, 2)) == pytest.approx(0.0, abs=1e-12)
    assert pa_rate(build_rho_abe(np.eye(2), 1)) == pytest.approx(key_rate(1.0, 0.0).r, abs=1e-12)


def test_basis_independence_random_unitaries():
    reports = list(sweep_random_unitaries(100, [1, 2, 4], seed=0))
    assert len(reports) == 300
    for report in reports:
        assert report.passed, report
        assert report.max_deviation <= 1e-12
        assert -1e-9 <= report.r_pa <= 1.0 + 1e-9


def test_basis_independence_negative_control_fails():
    assert not verify_basis_independence(np.eye(2), 1, negative_control=True).passed
    rng = np.random.default_rng(1)
    for dim in (1, 2, 4):
        report = verify_basis_independence(random_unitary(2 * dim, rng), dim, negative_control=True)
        assert not report.passed
        assert report.max_deviation > 1e-12


def test_mdi_trial_replays():
    first = mdi_trial(5, 17, 2)
    again = mdi_trial(5, 17, 2)
    assert first == again
    assert first.seed == (5, 17)
    assert first.to_dict()["seed"] == [5, 17]


def test_forward_ensembles():
    assert ensemble_deviation(exact_forward_ensemble()) <= 1e-12
    transcript = run_session(SessionConfig(n_rounds=4000, seed=6))
    assert ensemble_deviation(forward_ensemble(transcript)) <= 0.03


def test_exact_stats_reference_values():
    stats = exact_stats()
    assert stats.exact
    assert stats.xi == pytest.approx(1.0, abs=1e-12)
    assert stats.e == pytest.approx(0.0, abs=1e-12)

    stats = exact_stats(attack_intercept_resend(InterceptPolicy.RANDOM_ZX), ProtocolVariant.BB84_OTP)
    assert stats.xi == pytest.approx(0.5, abs=1e-12)
    assert stats.e == pytest.approx(0.25, abs=1e-12)


def test_exact_stats_needs_exact_announcer():
    custom = eve_faked_states(lambda view: ClickOutcome.BIT0)
    with pytest.raises(NotEnumerableError):
        exact_stats(custom, ProtocolVariant.TWO_OP, MeasurementLocus.EVE_MEASURES)


@pytest.mark.parametrize("name", ANNOUNCER_NAMES)
@pytest.mark.parametrize("variant", [ProtocolVariant.TWO_OP, ProtocolVariant.FOUR_OP])
def test_announcers_learn_nothing(name, variant):
    assert eve_information(build_announcer(name), variant) == 0.0


@pytest.mark.parametrize("variant", [ProtocolVariant.TWO_OP, ProtocolVariant.FOUR_OP])
def test_leaked_bob_bit_reveals_key(variant):
    strategy = build_announcer("measure_in_bob_basis")
    assert eve_information(strategy, variant, leak_bob_bit=True) == pytest.approx(1.0, abs=1e-12)


def test_eve_information_rejects_quantum_memory():
    with pytest.raises(NotEnumerableError):
        eve_information(build_attack("unitary_cnot"), ProtocolVariant.TWO_OP)


@pytest.mark.parametrize("n_enum", [1, 2])
def test_protocol_equivalence(n_enum):
    report = compare_protocols_bc(n_enum)
    assert report.passed
    assert report.max_deviation <= 1e-12
    assert report.public_marginal_four_op[0] == pytest.approx(0.5, abs=1e-12)
    assert report.public_marginal_otp[1] == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("policy", [InterceptPolicy.FIXED_Z, InterceptPolicy.RANDOM_ZX])
def test_protocol_equivalence_under_forward_attack(policy):
    report = compare_protocols_bc(1, attack_intercept_resend(policy))
    assert report.passed
    assert report.public_marginal_otp[0] == pytest.approx(0.5, abs=1e-12)


def test_protocol_equivalence_range():
    with pytest.raises(ValueError):
        compare_protocols_bc(0)
    with pytest.raises(ValueError):
        compare_protocols_bc(4)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
