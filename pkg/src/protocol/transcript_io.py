"""
Transcript serialization: JSON lines with a header object, plus a pandas view.

Line 1 is {"header": {"config": ..., "seed": ..., "attack": ..., "schema": 1}};
every following line is one RoundRecord with its field names as keys.
"""

import json
import logging
from pathlib import Path
from typing import Union

import pandas as pd

from src.errors import ConfigError
from src.utils import atomic_write_text
from .types import RoundRecord, SessionConfig, Transcript

logger = logging.getLogger(__name__)

TRANSCRIPT_SCHEMA = 1


def transcript_to_jsonl(transcript: Transcript) -> str:
    header = {
        "header": {
            "config": transcript.config.to_dict(),
            "seed": transcript.config.seed,
            "attack": transcript.attack_name,
            "schema": TRANSCRIPT_SCHEMA,
        }
    }
    lines = [json.dumps(header, sort_keys=True)]
    lines.extend(json.dumps(r.to_dict(), sort_keys=True) for r in transcript.rounds)
    return "\n".join(lines) + "\n"


def write_transcript(transcript: Transcript, path: Union[str, Path]) -> Path:
    """
    Write a transcript atomically as JSON lines.

    Args:
        transcript: Session transcript
        path: Destination file

    Returns:
        The written path
    """
    path = Path(path)
    atomic_write_text(path, transcript_to_jsonl(transcript))
    logger.info(f"Transcript written: {path} ({len(transcript.rounds)} rounds)")
    return path


def read_transcript(path: Union[str, Path]) -> Transcript:
    """
    Load a transcript written by write_transcript.

    Raw keys are rebuilt from the rounds by the session driver's rule.

    Raises:
        FileNotFoundError: Missing file
        ConfigError: Missing or unsupported header
    """
    path = Path(path)
    with open(path, 'r', encoding='utf-8') as f:
        lines = [line for line in f.read().splitlines() if line.strip()]
    if not lines:
        raise ConfigError(f"Empty transcript: {path}")

    first = json.loads(lines[0])
    header = first.get("header") if isinstance(first, dict) else None
    if header is None:
        raise ConfigError(f"Transcript {path} has no header line")
    if header.get("schema") != TRANSCRIPT_SCHEMA:
        raise ConfigError(f"Unsupported transcript schema {header.get('schema')} in {path}")

    config = SessionConfig.from_dict(header["config"])
    rounds = [RoundRecord.from_dict(json.loads(line)) for line in lines[1:]]
    return Transcript.from_rounds(config, rounds, header.get("attack", "none"))


def transcript_to_frame(transcript: Transcript) -> pd.DataFrame:
    """One row per round, columns named after the RoundRecord fields."""
    columns = list(RoundRecord.__dataclass_fields__)
    return pd.DataFrame([r.to_dict() for r in transcript.rounds], columns=columns)
