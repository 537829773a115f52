"""
Run configuration: YAML file + dotted overrides -> validated RunConfig.
"""

import copy
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import yaml

from src.adversary import ANNOUNCER_NAMES, ATTACK_FACTORIES, AttackStrategy, DetectorModel, build_attack
from src.errors import ConfigError
from src.protocol import MeasurementLocus, ProtocolVariant, SessionConfig
from src.utils import get_log_level, get_output_dir, load_config

logger = logging.getLogger(__name__)

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "protocol": {
        "n_rounds": 10000,
        "p_check": 0.5,
        "disclose_fraction": 0.1,
        "seed": 0,
        "variant": "two_op",
        "locus": "bob",
    },
    "attack": {"name": "none", "params": {}, "announcer": None},
    "detector": {"eta0": 1.0, "eta1": 1.0, "dark_rate": 0.0, "blinded": False, "override": None},
    "postproc": {"enabled": True, "margin": 32, "passes": 4, "inject_error_rate": 0.0},
    "verify": {"trials": 100, "ancilla_dims": [1, 2, 4], "tol": 1e-12},
    "suite": {"n_rounds": 20000, "variants": ["two_op", "four_op"]},
    "output": {"dir": "outputs", "formats": ["json", "csv"], "progress": False},
    "logging": {"level": "INFO"},
}

FORMATS = ("json", "csv")
# variants that have an announced outcome to move between Bob and Eve
PAIRED_VARIANTS = ("two_op", "four_op")
# Sections whose mapping values take arbitrary keys
FREE_FORM = {("attack", "params")}


def _merge(base: Dict[str, Any], update: Dict[str, Any], path: Tuple[str, ...] = ()):
    for key, value in update.items():
        where = path + (key,)
        if path in FREE_FORM:
            base[key] = value
            continue
        if key not in base:
            raise ConfigError(f"Unknown config key '{'.'.join(where)}'. Known: {sorted(base)}")
        if isinstance(base[key], dict):
            if value is None and where in FREE_FORM:
                continue
            if not isinstance(value, dict):
                raise ConfigError(f"Config key '{'.'.join(where)}' must be a mapping")
            _merge(base[key], value, where)
        else:
            base[key] = value


def parse_override(text: str) -> Dict[str, Any]:
    """
    Turn "section.key=value" into a nested mapping.

    The value is parsed as YAML so numbers, booleans, null and lists keep
    their types.
    """
    if "=" not in text:
        raise ConfigError(f"Override '{text}' is not of the form section.key=value")
    dotted, raw = text.split("=", 1)
    parts = [p for p in dotted.strip().split(".") if p]
    if len(parts) < 2:
        raise ConfigError(f"Override key '{dotted}' needs a section prefix")
    value = yaml.safe_load(raw) if raw.strip() else None
    nested: Dict[str, Any] = {parts[-1]: value}
    for part in reversed(parts[:-1]):
        nested = {part: nested}
    return nested


def flatten(config: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Dotted key -> value view of a nested config."""
    flat = {}
    for key, value in config.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, dict) and value:
            flat.update(flatten(value, dotted + "."))
        else:
            flat[dotted] = value
    return flat


@dataclass(frozen=True)
class RunConfig:
    """
    Everything a command needs: the session, the attack, the detector,
    post-processing and output settings.
    """
    session: SessionConfig
    attack_name: str
    attack_params: Dict[str, Any]
    announcer: Optional[str]
    postproc: Dict[str, Any]
    verify: Dict[str, Any]
    suite: Dict[str, Any]
    output_dir: Path
    formats: Tuple[str, ...]
    progress: bool
    log_level: str
    raw: Dict[str, Any]

    def build_attack(self) -> AttackStrategy:
        """Fresh strategy for one session."""
        return build_attack(self.attack_name, self.attack_params, self.announcer)

    def to_dict(self) -> Dict[str, Any]:
        """Resolved configuration (output location excluded, so artifacts do not depend on it)."""
        data = copy.deepcopy(self.raw)
        data["output"].pop("dir", None)
        return data


def build_run_config(raw: Dict[str, Any]) -> RunConfig:
    """
    Validate a merged configuration mapping.

    Raises:
        ConfigError: Unknown names or invalid values
    """
    attack = raw["attack"]
    if attack["name"] not in ATTACK_FACTORIES:
        raise ConfigError(f"Unknown attack '{attack['name']}'. Known: {sorted(ATTACK_FACTORIES)}")
    if attack["announcer"] is not None and attack["announcer"] not in ANNOUNCER_NAMES:
        raise ConfigError(f"Unknown announcer '{attack['announcer']}'. Known: {ANNOUNCER_NAMES}")

    formats = raw["output"]["formats"]
    formats = [formats] if isinstance(formats, str) else list(formats)
    unknown = [f for f in formats if f not in FORMATS]
    if unknown:
        raise ConfigError(f"Unknown output format(s) {unknown}. Known: {list(FORMATS)}")

    try:
        session = SessionConfig(detector=DetectorModel(**raw["detector"]), **raw["protocol"])
    except TypeError as e:
        raise ConfigError(f"Invalid protocol settings: {e}") from e

    run = RunConfig(
        session=session,
        attack_name=attack["name"],
        attack_params=dict(attack["params"] or {}),
        announcer=attack["announcer"],
        postproc=dict(raw["postproc"]),
        verify=dict(raw["verify"]),
        suite=dict(raw["suite"]),
        output_dir=Path(raw["output"]["dir"]),
        formats=tuple(formats),
        progress=bool(raw["output"]["progress"]),
        log_level=str(raw["logging"]["level"]).upper(),
        raw=raw,
    )
    # parameters are checked by building a throwaway strategy
    strategy = run.build_attack()
    if session.variant is ProtocolVariant.BB84_OTP:
        strategy.check_otp(session.locus is MeasurementLocus.EVE_MEASURES)
    else:
        strategy.check_locus(session.locus is MeasurementLocus.EVE_MEASURES)
    unpaired = [v for v in run.suite["variants"] if v not in PAIRED_VARIANTS]
    if unpaired:
        raise ConfigError(f"suite.variants {unpaired} cannot be paired across loci. Known: {list(PAIRED_VARIANTS)}")
    return run



def load_run_config(
    config_path: Optional[Union[str, Path]] = None,
    overrides: Iterable[str] = (),
    seed: Optional[int] = None,
    out: Optional[Union[str, Path]] = None,
    fmt: Optional[str] = None,
) -> RunConfig:
    """
    Defaults <- YAML file <- environment <- --set overrides <- flags.

    Args:
        config_path: YAML file; config/settings.yaml when omitted
        overrides: "section.key=value" strings
        seed: --seed
        out: --out
        fmt: --format

    Returns:
        RunConfig

    Raises:
        FileNotFoundError: Missing config file
        ConfigError: Invalid configuration
    """
    raw = copy.deepcopy(DEFAULTS)
    _merge(raw, load_config(config_path))

    raw["logging"]["level"] = get_log_level(raw["logging"]["level"])
    raw["output"]["dir"] = str(get_output_dir(raw["output"]["dir"]))

    for text in overrides:
        _merge(raw, parse_override(text))
    if seed is not None:
        raw["protocol"]["seed"] = int(seed)
    if out is not None:
        raw["output"]["dir"] = str(out)
    if fmt is not None:
        raw["output"]["formats"] = [fmt]

    run = build_run_config(raw)
    logger.debug(f"Run config: {flatten(run.to_dict())}")
    return run
