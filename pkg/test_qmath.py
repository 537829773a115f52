#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
qmath tests - states, Pauli convention, linear algebra, entropies
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from src.errors import DimensionMismatchError, InvalidStateError, NonUnitaryError
from src.qmath import (
    Basis,
    Bb84State,
    DensityMatrix,
    PauliOp,
    PureState,
    apply_on_factors,
    apply_unitary,
    bb84_density,
    bb84_ket,
    binary_entropy,
    born_probabilities,
    basis_kets,
    is_unitary,
    measure_projective,
    mutual_information,
    partial_trace,
    pauli_matrix,
    random_unitary,
    tensor,
    von_neumann_entropy,
)


def test_pauli_convention():
    """Y is the real antisymmetric matrix, i times the standard sigma_y."""
    X, Y, Z = (pauli_matrix(op) for op in (PauliOp.X, PauliOp.Y, PauliOp.Z))
    sigma_y = np.array([[0, -1j], [1j, 0]])
    assert np.array_equal(Y, np.array([[0, 1], [-1, 0]]))
    assert np.allclose(Y, 1j * sigma_y)
    assert np.allclose(Y, -(X @ Z))
    for op in PauliOp:
        assert is_unitary(pauli_matrix(op))


def test_pauli_matrix_is_read_only():
    with pytest.raises(ValueError):
        pauli_matrix(PauliOp.X)[0, 0] = 5


def test_bb84_state_accessors():
    assert [s.bit() for s in Bb84State] == [0, 1, 0, 1]
    assert [s.basis() for s in Bb84State] == [Basis.Z, Basis.Z, Basis.X, Basis.X]
    for state in Bb84State:
        assert Bb84State.from_basis_bit(state.basis(), state.bit()) is state
    assert np.allclose(bb84_ket(Bb84State.ONE_Z).amplitudes, [0, 1])
    assert np.allclose(bb84_ket(Bb84State.MINUS_X).amplitudes, np.array([1, -1]) / np.sqrt(2))


def test_pure_state_rejects_bad_norm():
    with pytest.raises(InvalidStateError):
        PureState(np.array([1.0, 1.0]))


def test_density_matrix_invariants():
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.array([[0.5, 0.1], [0.3, 0.5]]))
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.eye(2))
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(DimensionMismatchError):
        DensityMatrix(np.eye(4) / 4, dims=(2, 3))
    assert DensityMatrix.maximally_mixed(4).dims == (4,)


def test_tensor_and_partial_trace():
    rho = bb84_density(Bb84State.PLUS_X)
    sigma = DensityMatrix.maximally_mixed(3)
    joint = tensor(rho, sigma)
    assert joint.dims == (2, 3)
    assert partial_trace(joint, [0]).allclose(rho)
    assert partial_trace(joint, [1]).allclose(sigma)


def test_partial_trace_of_bell_state_is_mixed():
    bell = PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), dims=(2, 2)).to_density()
    assert partial_trace(bell, [0]).allclose(DensityMatrix.maximally_mixed(2))
    assert von_neumann_entropy(bell) == pytest.approx(0.0, abs=1e-12)
    assert von_neumann_entropy(partial_trace(bell, [1])) == pytest.approx(1.0, abs=1e-12)


def test_apply_unitary_checks():
    rho = bb84_density(Bb84State.ZERO_Z)
    flipped = apply_unitary(rho, pauli_matrix(PauliOp.X))
    assert flipped.allclose(bb84_density(Bb84State.ONE_Z))
    with pytest.raises(NonUnitaryError):
        apply_unitary(rho, np.array([[1, 1], [0, 1]]))
    with pytest.raises(DimensionMismatchError):
        apply_unitary(rho, np.eye(4))


def test_apply_on_factors_cnot_from_qubit_to_last_factor():
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    one = bb84_density(Bb84State.ONE_Z)
    middle = DensityMatrix.maximally_mixed(3)
    ancilla = bb84_density(Bb84State.ZERO_Z)
    state = tensor(tensor(one, middle), ancilla)
    out = apply_on_factors(state, cnot, [0, 2])
    assert out.dims == (2, 3, 2)
    assert partial_trace(out, [2]).allclose(bb84_density(Bb84State.ONE_Z))
    assert partial_trace(out, [1]).allclose(middle)


def test_born_probabilities():
    probs = born_probabilities(bb84_ket(Bb84State.PLUS_X), basis_kets(Basis.Z))
    assert np.allclose(probs, [0.5, 0.5])
    probs = born_probabilities(bb84_density(Bb84State.MINUS_X), basis_kets(Basis.X))
    assert np.allclose(probs, [0.0, 1.0])


def test_measure_projective_eigenstate_is_deterministic():
    rng = np.random.default_rng(1)
    for _ in range(50):
        bit, post = measure_projective(bb84_density(Bb84State.ONE_Z), Basis.Z, rng)
        assert bit == 1
        assert post.allclose(bb84_density(Bb84State.ONE_Z))


def test_measure_projective_frequency():
    rng = np.random.default_rng(7)
    n = 4000
    ones = sum(measure_projective(bb84_ket(Bb84State.PLUS_X), Basis.Z, rng)[0] for _ in range(n))
    sigma = np.sqrt(0.25 / n)
    assert abs(ones / n - 0.5) <= 4 * sigma


def test_random_unitary():
    rng = np.random.default_rng(3)
    for dim in (1, 2, 4, 8):
        assert is_unitary(random_unitary(dim, rng))
    with pytest.raises(ValueError):
        random_unitary(0, rng)


def test_entropies():
    assert von_neumann_entropy(DensityMatrix.maximally_mixed(2)) == pytest.approx(1.0)
    assert von_neumann_entropy(DensityMatrix.maximally_mixed(8)) == pytest.approx(3.0)
    assert von_neumann_entropy(bb84_density(Bb84State.PLUS_X)) == pytest.approx(0.0, abs=1e-12)
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    x = 0.11
    assert binary_entropy(x) == pytest.approx(-x * np.log2(x) - (1 - x) * np.log2(1 - x))
    with pytest.raises(ValueError):
        binary_entropy(1.2)


def test_mutual_information():
    correlated = {(0, 0): 0.5, (1, 1): 0.5}
    independent = {(a, b): 0.25 for a in (0, 1) for b in (0, 1)}
    assert mutual_information(correlated) == pytest.approx(1.0)
    assert mutual_information(independent) == pytest.approx(0.0, abs=1e-12)


def _random_density(dim: int, rng: np.random.Generator) -> DensityMatrix:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real)


@pytest.mark.parametrize("dim_a,dim_b", [(2, 2), (2, 3), (3, 4)])
def test_tensor_trace_is_multiplicative(dim_a, dim_b):
    rng = np.random.default_rng(dim_a * 10 + dim_b)
    for _ in range(5):
        rho, sigma = _random_density(dim_a, rng), _random_density(dim_b, rng)
        joint = tensor(rho, sigma)
        expected = np.trace(rho.matrix) * np.trace(sigma.matrix)
        assert np.trace(joint.matrix) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("dim_a,dim_b", [(2, 2), (2, 3), (3, 4)])
def test_entropy_is_additive_on_products(dim_a, dim_b):
    rng = np.random.default_rng(100 + dim_a * 10 + dim_b)
    for _ in range(5):
        rho, sigma = _random_density(dim_a, rng), _random_density(dim_b, rng)
        joint = von_neumann_entropy(tensor(rho, sigma))
        assert joint == pytest.approx(von_neumann_entropy(rho) + von_neumann_entropy(sigma), abs=1e-9)


def test_measurement_on_second_factor():
    ket = tensor(bb84_ket(Bb84State.ONE_Z), bb84_ket(Bb84State.PLUS_X))
    assert np.allclose(born_probabilities(ket, basis_kets(Basis.X), subsystem=1), [1.0, 0.0])
    assert np.allclose(born_probabilities(ket, basis_kets(Basis.Z), subsystem=1), [0.5, 0.5])
    assert np.allclose(born_probabilities(ket.to_density(), basis_kets(Basis.Z), subsystem=0), [0.0, 1.0])

    bit, post = measure_projective(ket.to_density(), Basis.X, np.random.default_rng(0), subsystem=1)
    assert bit == 0
    assert post.allclose(ket.to_density())


def test_derived_states_remain_valid():
    rng = np.random.default_rng(8)
    bell = PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), dims=(2, 2)).to_density()
    for basis in (Basis.Z, Basis.X):
        bit, post = measure_projective(bell, basis, rng)
        DensityMatrix(post.matrix, post.dims)
        assert partial_trace(post, [1]).allclose(bb84_density(Bb84State.from_basis_bit(basis, bit)))
    evolved = apply_unitary(_random_density(2, rng), random_unitary(2, rng))
    DensityMatrix(evolved.matrix, evolved.dims)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
