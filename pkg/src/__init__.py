"""
DQKD Toolkit - two-way deterministic QKD simulator
Sessions, attacks, security-rate analysis and key post-processing
"""

__version__ = "1.0.0"
