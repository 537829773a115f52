"""
Named attack registry used by run configurations and the attack suite.
"""

from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from src.errors import ConfigError
from src.qmath import random_unitary
from .announcers import FAKED_STATE_RULES
from .lines import InterceptPolicy
from .strategies import (
    AttackStrategy,
    attack_depolarize,
    attack_intercept_resend,
    attack_none,
    attack_unitary_ancilla,
    compose_attacks,
    eve_faked_states,
    eve_measure_in_bob_basis,
)

CNOT = np.array([
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 0, 1],
    [0, 0, 1, 0],
], dtype=complex)


def _unitary_random(ancilla_dim: int = 2, seed: int = 0) -> AttackStrategy:
    U = random_unitary(2 * int(ancilla_dim), np.random.default_rng(int(seed)))
    return attack_unitary_ancilla(U, int(ancilla_dim), name=f"unitary_random[d={ancilla_dim},seed={seed}]")


ATTACK_FACTORIES: Dict[str, Callable[..., AttackStrategy]] = {
    "none": attack_none,
    "intercept_resend": lambda policy="random_zx", fraction=1.0: attack_intercept_resend(
        InterceptPolicy(policy), float(fraction)),
    "unitary_cnot": lambda: attack_unitary_ancilla(CNOT, 2, name="unitary_cnot"),
    "unitary_random": _unitary_random,
    "depolarize": lambda p_forward=0.0, p_backward=0.0: attack_depolarize(float(p_forward), float(p_backward)),
    "eve_measure_in_bob_basis": eve_measure_in_bob_basis,
    "faked_states": lambda rule="always_bit0": eve_faked_states(rule),
}

ANNOUNCER_NAMES = ["measure_in_bob_basis"] + sorted(FAKED_STATE_RULES)


def build_announcer(name: str) -> AttackStrategy:
    """Announcement-only strategy by registry name."""
    if name == "measure_in_bob_basis":
        return eve_measure_in_bob_basis()
    if name in FAKED_STATE_RULES:
        return eve_faked_states(name)
    raise ConfigError(f"Unknown announcer '{name}'. Known: {ANNOUNCER_NAMES}")


def build_attack(name: str, params: Optional[Mapping[str, Any]] = None,
                 announcer: Optional[str] = None) -> AttackStrategy:
    """
    Build a fresh strategy from registry names.

    Args:
        name: Key of ATTACK_FACTORIES
        params: Keyword parameters of the factory
        announcer: Optional announcer name composed on top of the line attack

    Returns:
        New, unbound AttackStrategy

    Raises:
        ConfigError: Unknown name or bad parameters
    """
    if name not in ATTACK_FACTORIES:
        raise ConfigError(f"Unknown attack '{name}'. Known: {sorted(ATTACK_FACTORIES)}")
    try:
        strategy = ATTACK_FACTORIES[name](**dict(params or {}))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Bad parameters for attack '{name}': {e}") from e
    if announcer:
        strategy = compose_attacks(strategy, build_announcer(announcer))
    return strategy


# Forward-line attacks swept by the attack suite
FORWARD_SUITE: List[Tuple[str, Dict[str, Any]]] = [
    ("none", {}),
    ("intercept_resend", {"policy": "random_zx"}),
    ("intercept_resend", {"policy": "fixed_z"}),
    ("intercept_resend", {"policy": "breidbart"}),
    ("intercept_resend", {"policy": "random_zx", "fraction": 0.2}),
    ("unitary_cnot", {}),
    ("depolarize", {"p_forward": 0.05, "p_backward": 0.05}),
]
