#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Adversary tests - line attacks, detectors, announcers, registry
"""

import sys
from dataclasses import fields
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from src.adversary import (
    CNOT,
    FORWARD_SUITE,
    ClickOutcome,
    DetectorModel,
    EveView,
    InterceptPolicy,
    InterceptResend,
    UnitaryAncilla,
    attack_depolarize,
    attack_intercept_resend,
    attack_none,
    build_announcer,
    build_attack,
    detector_click,
    detector_distribution,
    eve_faked_states,
    eve_measure_in_bob_basis,
)
from src.analysis import estimate_stats, exact_stats
from src.errors import ConfigError, DimensionMismatchError, LocusError, NonUnitaryError
from src.protocol import MeasurementLocus, ProtocolVariant, SessionConfig, run_session
from src.qmath import Basis, Bb84State, basis_kets, bb84_density, born_probabilities


def _forward_fidelity(strategy, state: Bb84State) -> float:
    received = strategy.forward.channel(bb84_density(state))
    return float(born_probabilities(received, basis_kets(state.basis()))[state.bit()])


@pytest.mark.parametrize("policy", [InterceptPolicy.RANDOM_ZX, InterceptPolicy.BREIDBART])
def test_intercept_resend_three_quarter_fidelity(policy):
    strategy = attack_intercept_resend(policy)
    for state in Bb84State:
        assert _forward_fidelity(strategy, state) == pytest.approx(0.75, abs=1e-12)


def test_fixed_basis_intercept_resend():
    strategy = attack_intercept_resend(InterceptPolicy.FIXED_Z)
    expected = {Bb84State.ZERO_Z: 1.0, Bb84State.ONE_Z: 1.0, Bb84State.PLUS_X: 0.5, Bb84State.MINUS_X: 0.5}
    for state, fidelity in expected.items():
        assert _forward_fidelity(strategy, state) == pytest.approx(fidelity, abs=1e-12)


def test_partial_intercept_fraction():
    strategy = attack_intercept_resend(InterceptPolicy.RANDOM_ZX, fraction=0.2)
    assert _forward_fidelity(strategy, Bb84State.PLUS_X) == pytest.approx(0.95, abs=1e-12)
    with pytest.raises(ConfigError):
        InterceptResend(fraction=1.5)


def test_cnot_attack_dephases_in_z():
    strategy = build_attack("unitary_cnot")
    assert strategy.quantum_memory
    assert _forward_fidelity(strategy, Bb84State.ZERO_Z) == pytest.approx(1.0, abs=1e-12)
    assert _forward_fidelity(strategy, Bb84State.ONE_Z) == pytest.approx(1.0, abs=1e-12)
    assert _forward_fidelity(strategy, Bb84State.PLUS_X) == pytest.approx(0.5, abs=1e-12)
    assert _forward_fidelity(strategy, Bb84State.MINUS_X) == pytest.approx(0.5, abs=1e-12)


def test_unitary_ancilla_validation():
    with pytest.raises(DimensionMismatchError):
        UnitaryAncilla(CNOT, ancilla_dim=3)
    with pytest.raises(NonUnitaryError):
        UnitaryAncilla(np.ones((4, 4)), ancilla_dim=2)


def test_depolarize_fidelity():
    strategy = attack_depolarize(p_forward=0.2)
    for state in Bb84State:
        assert _forward_fidelity(strategy, state) == pytest.approx(0.9, abs=1e-12)


def test_detector_distribution_reference_values():
    one = bb84_density(Bb84State.ZERO_Z)
    dist = detector_distribution(DetectorModel(eta0=0.0), one, Basis.Z)
    assert dist[ClickOutcome.NO_CLICK] == pytest.approx(1.0)

    plus = bb84_density(Bb84State.PLUS_X)
    dist = detector_distribution(DetectorModel(eta1=0.5), plus, Basis.Z)
    assert dist[ClickOutcome.BIT0] == pytest.approx(0.5)
    assert dist[ClickOutcome.BIT1] == pytest.approx(0.25)
    assert dist[ClickOutcome.NO_CLICK] == pytest.approx(0.25)
    assert dist[ClickOutcome.DOUBLE_CLICK] == pytest.approx(0.0)

    dist = detector_distribution(DetectorModel(dark_rate=0.1), one, Basis.Z)
    assert dist[ClickOutcome.BIT0] == pytest.approx(0.9)
    assert dist[ClickOutcome.DOUBLE_CLICK] == pytest.approx(0.1)

    blinded = DetectorModel(blinded=True, override="force_bit1")
    assert detector_distribution(blinded, one, Basis.Z)[ClickOutcome.BIT1] == 1.0
    assert detector_click(blinded, one, Basis.X, np.random.default_rng(0)) is ClickOutcome.BIT1


def test_detector_sampling_matches_distribution():
    model = DetectorModel(eta1=0.5)
    plus = bb84_density(Bb84State.PLUS_X)
    rng = np.random.default_rng(9)
    n = 4000
    samples = [detector_click(model, plus, Basis.Z, rng) for _ in range(n)]
    for outcome, p in detector_distribution(model, plus, Basis.Z).items():
        freq = sum(1 for s in samples if s is outcome) / n
        assert abs(freq - p) <= 4 * np.sqrt(max(p * (1 - p), 1e-12) / n) + 1e-12


def test_detector_model_validation():
    with pytest.raises(ConfigError):
        DetectorModel(eta0=1.5)
    with pytest.raises(ConfigError):
        DetectorModel(dark_rate=1.0)
    with pytest.raises(ConfigError):
        DetectorModel(blinded=True)


def test_eve_view_exposes_only_her_information():
    assert [f.name for f in fields(EveView)] == ["state", "basis", "records", "rng"]


def test_strategy_requires_binding_and_order():
    strategy = attack_none()
    with pytest.raises(RuntimeError):
        strategy.on_forward(bb84_density(Bb84State.ZERO_Z))
    rngs = np.random.default_rng(0).spawn(3)
    strategy.bind(*rngs)
    strategy.on_forward(bb84_density(Bb84State.ZERO_Z))
    with pytest.raises(RuntimeError):
        strategy.announce(Basis.Z)


def test_strategy_memory_persists_records():
    strategy = attack_intercept_resend()
    config = SessionConfig(n_rounds=300, seed=4)
    run_session(config, attack=strategy)
    assert len(strategy.memory) == 300
    labels = {records[0][0] for records in strategy.memory}
    assert labels == {"Z", "X"}


@pytest.mark.parametrize("name,params", FORWARD_SUITE)
def test_exact_stats_agree_across_loci(name, params):
    """Honest announcement by Eve is indistinguishable from Bob measuring."""
    bob = exact_stats(build_attack(name, params), ProtocolVariant.TWO_OP, MeasurementLocus.BOB_MEASURES)
    eve = exact_stats(build_attack(name, params, "measure_in_bob_basis"), ProtocolVariant.TWO_OP,
                      MeasurementLocus.EVE_MEASURES)
    for attr in ("f0", "f1", "fplus", "fminus", "xi", "e"):
        assert getattr(bob, attr) == pytest.approx(getattr(eve, attr), abs=1e-12)


def test_intercept_resend_error_rate():
    stats = exact_stats(attack_intercept_resend(), ProtocolVariant.TWO_OP)
    assert stats.xi == pytest.approx(0.5, abs=1e-12)
    assert stats.e == pytest.approx(0.25, abs=1e-12)


@pytest.mark.parametrize("rule", ["always_bit0", "random_bit", "wrong_basis"])
def test_faked_states_cause_half_error(rule):
    stats = exact_stats(eve_faked_states(rule), ProtocolVariant.TWO_OP, MeasurementLocus.EVE_MEASURES)
    assert stats.xi == pytest.approx(1.0, abs=1e-12)
    assert stats.e == pytest.approx(0.5, abs=1e-12)


def test_faked_states_sampled_error_rate():
    config = SessionConfig(n_rounds=8000, seed=2, locus=MeasurementLocus.EVE_MEASURES)
    stats = estimate_stats(run_session(config, attack=eve_faked_states("random_bit")))
    sigma = np.sqrt(0.25 / stats.n_disclosed)
    assert abs(stats.e - 0.5) <= 4 * sigma


def test_measure_announced_basis_matches_honest_announcer():
    config = SessionConfig(n_rounds=1500, seed=23, locus=MeasurementLocus.EVE_MEASURES)
    faked = run_session(config, attack=eve_faked_states("measure_announced_basis"))
    honest = run_session(config, attack=eve_measure_in_bob_basis())
    assert faked.rounds == honest.rounds
    assert np.array_equal(faked.bob_raw_key, honest.bob_raw_key)


def test_cnot_attack_same_statistics_at_both_loci():
    """The honest announcer replays Bob's detector draw for the CNOT ancilla attack."""
    bob = run_session(SessionConfig(n_rounds=3000, seed=31), attack=build_attack("unitary_cnot"))
    eve = run_session(SessionConfig(n_rounds=3000, seed=31, locus=MeasurementLocus.EVE_MEASURES),
                      attack=build_attack("unitary_cnot", announcer="measure_in_bob_basis"))
    assert bob.rounds == eve.rounds
    bob_stats, eve_stats = estimate_stats(bob), estimate_stats(eve)
    assert bob_stats.xi == eve_stats.xi
    assert bob_stats.e == eve_stats.e


def test_exact_stats_rejects_announcers_without_announced_outcome():
    with pytest.raises(LocusError):
        exact_stats(eve_faked_states("always_bit0"), ProtocolVariant.BB84_OTP, MeasurementLocus.EVE_MEASURES)
    with pytest.raises(LocusError):
        exact_stats(attack_none(), ProtocolVariant.BB84_OTP, MeasurementLocus.EVE_MEASURES)
    with pytest.raises(LocusError):
        exact_stats(eve_faked_states("always_bit0"), ProtocolVariant.BB84_OTP)


def test_registry_rejects_unknown_names():
    with pytest.raises(ConfigError):
        build_attack("photon_number_splitting")
    with pytest.raises(ConfigError):
        build_attack("intercept_resend", {"policy": "diagonal"})
    with pytest.raises(ConfigError):
        build_attack("none", {"strength": 1})
    with pytest.raises(ConfigError):
        build_announcer("lie_sometimes")
    with pytest.raises(ConfigError):
        eve_faked_states("lie_sometimes")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
