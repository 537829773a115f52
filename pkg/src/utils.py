"""
Utility functions: configuration, environment, paths, logging
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from dotenv import load_dotenv


DEFAULT_CONFIG_PATH = Path("config/settings.yaml")


def get_project_root() -> Path:
    """
    Get the project root directory

    Returns:
        Project root path
    """
    return Path(__file__).parent.parent


def load_config(config_path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    Load a YAML configuration file

    Args:
        config_path: Path to the file; defaults to config/settings.yaml
            relative to the working directory, then to the project root

    Returns:
        Configuration dictionary

    Raises:
        FileNotFoundError: If the configuration file does not exist
    """
    if config_path is None:
        config_path = DEFAULT_CONFIG_PATH
        if not config_path.exists():
            config_path = get_project_root() / DEFAULT_CONFIG_PATH
    config_path = Path(config_path)
    if not config_path.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    with open(config_path, 'r', encoding='utf-8') as f:
        config = yaml.safe_load(f) or {}

    if not isinstance(config, dict):
        raise ValueError(f"Configuration root must be a mapping: {config_path}")
    return config


def load_env():
    """
    Load optional environment variables from config/.env, then from the
    working directory. Nothing is required.
    """
    env_path = get_project_root() / "config" / ".env"
    if env_path.exists():
        load_dotenv(env_path)
    else:
        load_dotenv()


def get_log_level(default: str = "INFO") -> str:
    """
    Resolve the log level, DQKD_LOG_LEVEL taking precedence

    Args:
        default: Level used when the variable is unset

    Returns:
        Upper-case level name
    """
    return os.getenv("DQKD_LOG_LEVEL", default).upper()


def get_output_dir(default: Union[str, Path]) -> Path:
    """
    Resolve the output directory, DQKD_OUTPUT_DIR taking precedence

    Args:
        default: Directory used when the variable is unset

    Returns:
        Output directory path
    """
    return Path(os.getenv("DQKD_OUTPUT_DIR", str(default)))


def setup_logging(level: str = "INFO"):
    """
    Configure root logging once for command-line use

    Args:
        level: Level name (DEBUG, INFO, WARNING, ...)
    """
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def ensure_dir(path: Path):
    """
    Ensure a directory exists

    Args:
        path: Directory path
    """
    path.mkdir(parents=True, exist_ok=True)


def atomic_write_text(path: Union[str, Path], text: str):
    """
    Write a text file through a temporary sibling and rename it into place

    Args:
        path: Destination file
        text: File content (written as UTF-8 with LF newlines)
    """
    path = Path(path)
    ensure_dir(path.parent)
    tmp = path.with_name(f".{path.name}.tmp")
    with open(tmp, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    os.replace(tmp, path)
