"""
Protocol module - parties, session drivers, transcripts
"""

from .types import (
    MeasurementLocus,
    Mode,
    ModeDecision,
    ProtocolVariant,
    RoundRecord,
    SessionConfig,
    Transcript,
)
from .parties import (
    alice_encode,
    alice_receive,
    apply_encoding,
    bob_decode,
    bob_prepare,
    key_bit_from_table,
    two_op_key_bit,
)
from .session import BasisGate, run_bb84_otp_session, run_session
from .transcript_io import read_transcript, transcript_to_frame, transcript_to_jsonl, write_transcript

__all__ = [
    'MeasurementLocus', 'Mode', 'ModeDecision', 'ProtocolVariant', 'RoundRecord',
    'SessionConfig', 'Transcript',
    'alice_encode', 'alice_receive', 'apply_encoding', 'bob_decode', 'bob_prepare',
    'key_bit_from_table', 'two_op_key_bit',
    'BasisGate', 'run_bb84_otp_session', 'run_session',
    'read_transcript', 'transcript_to_frame', 'transcript_to_jsonl', 'write_transcript',
]
