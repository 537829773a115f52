"""
Report writers. Every artifact is written atomically and carries the seed;
nothing time-dependent is recorded.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from src.analysis import ChannelStats, KeyRateReport
from src.postproc import FinalKey
from src.protocol import Transcript
from src.utils import atomic_write_text

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = [
    "variant", "locus", "attack", "n", "f0", "f1", "fplus", "fminus",
    "xi", "e", "r", "abort", "seed",
]
FLOAT_FORMAT = "%.6f"


def _plain(value: Any) -> Any:
    """Convert numpy scalars and containers for json."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    return value


def write_json(path: Path, payload: Dict[str, Any]) -> Path:
    atomic_write_text(path, json.dumps(_plain(payload), indent=2, sort_keys=True) + "\n")
    logger.info(f"Report written: {path}")
    return path


def write_csv(path: Path, frame: pd.DataFrame) -> Path:
    atomic_write_text(path, frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n"))
    logger.info(f"Table written: {path}")
    return path


def summary_row(transcript: Transcript, stats: ChannelStats, report: KeyRateReport) -> Dict[str, Any]:
    config = transcript.config
    return {
        "variant": config.variant.value,
        "locus": config.locus.value,
        "attack": transcript.attack_name,
        "n": config.n_rounds,
        "f0": stats.f0,
        "f1": stats.f1,
        "fplus": stats.fplus,
        "fminus": stats.fminus,
        "xi": stats.xi,
        "e": stats.e,
        "r": report.r,
        "abort": report.abort,
        "seed": config.seed,
    }


def summary_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    """Summary table with the stable column order."""
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def write_final_key(directory: Path, key: FinalKey, payload: Dict[str, Any]) -> Path:
    """Final key as lowercase hex plus an accounting JSON sidecar."""
    key_path = directory / "final_key.hex"
    atomic_write_text(key_path, key.hex() + "\n")
    write_json(directory / "final_key.json", payload)
    return key_path
