"""
Exact small-dimension quantum linear algebra
"""

from .states import (
    Basis,
    Bb84State,
    DensityMatrix,
    PauliOp,
    PureState,
    basis_kets,
    basis_projectors,
    bb84_density,
    bb84_ket,
    pauli_matrix,
)
from .linalg import (
    apply_on_factors,
    apply_unitary,
    born_probabilities,
    is_unitary,
    measure_in,
    measure_projective,
    mixture,
    partial_trace,
    permute_factors,
    project,
    random_unitary,
    tensor,
)
from .entropy import binary_entropy, mutual_information, shannon_entropy, von_neumann_entropy

__all__ = [
    'Basis', 'Bb84State', 'DensityMatrix', 'PauliOp', 'PureState',
    'basis_kets', 'basis_projectors', 'bb84_density', 'bb84_ket', 'pauli_matrix',
    'apply_on_factors', 'apply_unitary', 'born_probabilities', 'is_unitary',
    'measure_in', 'measure_projective', 'mixture', 'partial_trace', 'permute_factors', 'project',
    'random_unitary', 'tensor',
    'binary_entropy', 'mutual_information', 'shannon_entropy', 'von_neumann_entropy',
]
