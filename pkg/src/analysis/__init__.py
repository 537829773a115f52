"""
Analysis module - channel statistics, key rate, density-matrix verification, enumeration
"""

from .stats import STATE_ORDER, ChannelStats, estimate_stats, exact_stats, xi_from_fidelities
from .key_rate import ABORT_RATE, ABORT_XI, XI_THRESHOLD, KeyRateReport, key_rate
from .mdi import (
    BasisIndependenceReport,
    basis_ensemble,
    build_rho_abe,
    ensemble_deviation,
    exact_forward_ensemble,
    forward_ensemble,
    mdi_trial,
    pa_rate,
    sweep_random_unitaries,
    verify_basis_independence,
)
from .enumeration import EquivalenceReport, compare_protocols_bc, eve_information, eve_view_distribution

__all__ = [
    'STATE_ORDER', 'ChannelStats', 'estimate_stats', 'exact_stats', 'xi_from_fidelities',
    'ABORT_RATE', 'ABORT_XI', 'XI_THRESHOLD', 'KeyRateReport', 'key_rate',
    'BasisIndependenceReport', 'basis_ensemble', 'build_rho_abe', 'ensemble_deviation',
    'exact_forward_ensemble', 'forward_ensemble', 'mdi_trial', 'pa_rate',
    'sweep_random_unitaries', 'verify_basis_independence',
    'EquivalenceReport', 'compare_protocols_bc', 'eve_information', 'eve_view_distribution',
]
