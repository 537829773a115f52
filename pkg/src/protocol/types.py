"""
Protocol data types: variants, session configuration, round records, transcripts.
"""

from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.adversary import IDEAL_DETECTOR, ClickOutcome, DetectorModel
from src.errors import ConfigError
from src.qmath import Basis, Bb84State, PauliOp


class ProtocolVariant(str, Enum):
    """Two-op (I/Y), four-op (Table I) and BB84 forward + classical OTP backward"""
    TWO_OP = "two_op"
    FOUR_OP = "four_op"
    BB84_OTP = "bb84_otp"

    def ops(self) -> Tuple[PauliOp, ...]:
        if self is ProtocolVariant.TWO_OP:
            return (PauliOp.I, PauliOp.Y)
        if self is ProtocolVariant.FOUR_OP:
            return (PauliOp.I, PauliOp.X, PauliOp.Y, PauliOp.Z)
        return ()


class MeasurementLocus(str, Enum):
    """Who measures the returned qubit"""
    BOB_MEASURES = "bob"
    EVE_MEASURES = "eve"


class Mode(str, Enum):
    CHECK = "check"
    ENCODE = "encode"


@dataclass(frozen=True)
class SessionConfig:
    """
    Parameters of one protocol session.

    Attributes:
        n_rounds: Number of qubits Bob sends
        p_check: Probability Alice switches a round to check mode
        disclose_fraction: Fraction of encode rounds disclosed to estimate e
        seed: Session seed (64-bit)
        variant: Protocol variant
        locus: Who measures the returned qubit
        detector: Bob's detector model (BobMeasures only)
        allow_degenerate: Accept p_check / disclose_fraction of exactly 0 or 1 (tests)
    """
    n_rounds: int
    p_check: float = 0.5
    disclose_fraction: float = 0.1
    seed: int = 0
    variant: ProtocolVariant = ProtocolVariant.TWO_OP
    locus: MeasurementLocus = MeasurementLocus.BOB_MEASURES
    detector: DetectorModel = IDEAL_DETECTOR
    allow_degenerate: bool = False

    def __post_init__(self):
        try:
            object.__setattr__(self, "variant", ProtocolVariant(self.variant))
            object.__setattr__(self, "locus", MeasurementLocus(self.locus))
        except ValueError as e:
            raise ConfigError(str(e)) from e
        if isinstance(self.detector, dict):
            object.__setattr__(self, "detector", DetectorModel(**self.detector))
        if int(self.n_rounds) < 1:
            raise ConfigError(f"n_rounds must be positive, got {self.n_rounds}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        for name in ("p_check", "disclose_fraction"):
            value = getattr(self, name)
            inside = 0.0 <= value <= 1.0 if self.allow_degenerate else 0.0 < value < 1.0
            if not inside:
                raise ConfigError(f"{name} must lie in (0, 1), got {value}")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["variant"] = self.variant.value
        data["locus"] = self.locus.value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SessionConfig":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})


@dataclass(frozen=True)
class ModeDecision:
    """Alice's choice for one received qubit"""
    mode: Mode
    check_basis: Optional[Basis] = None
    check_outcome: Optional[int] = None


@dataclass(frozen=True)
class RoundRecord:
    """Everything that happened in one round"""
    index: int
    bob_basis: Basis
    bob_bit: int
    mode: Mode
    alice_check_basis: Optional[Basis] = None
    alice_check_outcome: Optional[int] = None
    alice_op: Optional[PauliOp] = None
    alice_key_bit: Optional[int] = None
    announced_outcome: Optional[ClickOutcome] = None
    bob_decoded_bit: Optional[int] = None
    disclosed: bool = False
    public_bit: Optional[int] = None

    @property
    def bob_state(self) -> Bb84State:
        return Bb84State.from_basis_bit(self.bob_basis, self.bob_bit)

    @property
    def conclusive(self) -> bool:
        return self.mode is Mode.ENCODE and self.bob_decoded_bit is not None

    def to_dict(self) -> Dict[str, Any]:
        data = {}
        for f in fields(self):
            value = getattr(self, f.name)
            data[f.name] = value.value if isinstance(value, Enum) else value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RoundRecord":
        def opt(enum, value):
            return None if value is None else enum(value)

        return cls(
            index=int(data["index"]),
            bob_basis=Basis(data["bob_basis"]),
            bob_bit=int(data["bob_bit"]),
            mode=Mode(data["mode"]),
            alice_check_basis=opt(Basis, data.get("alice_check_basis")),
            alice_check_outcome=data.get("alice_check_outcome"),
            alice_op=opt(PauliOp, data.get("alice_op")),
            alice_key_bit=data.get("alice_key_bit"),
            announced_outcome=opt(ClickOutcome, data.get("announced_outcome")),
            bob_decoded_bit=data.get("bob_decoded_bit"),
            disclosed=bool(data.get("disclosed", False)),
            public_bit=data.get("public_bit"),
        )


def _frozen_bits(bits: List[int]) -> np.ndarray:
    array = np.array(bits, dtype=np.uint8)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class Transcript:
    """
    Audit trail of a session.

    Raw keys collect the encode-mode, non-disclosed, conclusive rounds;
    `raw_key_rounds[i]` is the round index behind raw-key position i.
    """
    config: SessionConfig
    rounds: Tuple[RoundRecord, ...]
    attack_name: str = "none"
    alice_raw_key: np.ndarray = field(default=None, compare=False)
    bob_raw_key: np.ndarray = field(default=None, compare=False)
    raw_key_rounds: Tuple[int, ...] = ()

    @classmethod
    def from_rounds(cls, config: SessionConfig, rounds, attack_name: str = "none") -> "Transcript":
        rounds = tuple(rounds)
        keyed = [r for r in rounds if r.conclusive and not r.disclosed]
        return cls(
            config=config,
            rounds=rounds,
            attack_name=attack_name,
            alice_raw_key=_frozen_bits([r.alice_key_bit for r in keyed]),
            bob_raw_key=_frozen_bits([r.bob_decoded_bit for r in keyed]),
            raw_key_rounds=tuple(r.index for r in keyed),
        )

    @property
    def lost_rounds(self) -> int:
        """Encode rounds with no click (dropped from the raw keys)"""
        return sum(1 for r in self.rounds
                   if r.mode is Mode.ENCODE and r.announced_outcome is ClickOutcome.NO_CLICK)

    @property
    def double_clicks(self) -> int:
        return sum(1 for r in self.rounds if r.announced_outcome is ClickOutcome.DOUBLE_CLICK)

    def same_as(self, other: "Transcript") -> bool:
        """Field-by-field equality including the raw keys."""
        return (self == other
                and np.array_equal(self.alice_raw_key, other.alice_raw_key)
                and np.array_equal(self.bob_raw_key, other.bob_raw_key))
