"""
CLI module - run configuration, commands, report writers
"""

from .config import DEFAULTS, RunConfig, build_run_config, flatten, load_run_config, parse_override
from .commands import (
    EXIT_ABORT,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFY_FAILED,
    cmd_analyze,
    cmd_attack_suite,
    cmd_run,
    cmd_verify_mdi,
)
from .reports import SUMMARY_COLUMNS, summary_frame, summary_row, write_csv, write_json

__all__ = [
    'DEFAULTS', 'RunConfig', 'build_run_config', 'flatten', 'load_run_config', 'parse_override',
    'EXIT_ABORT', 'EXIT_OK', 'EXIT_USAGE', 'EXIT_VERIFY_FAILED',
    'cmd_analyze', 'cmd_attack_suite', 'cmd_run', 'cmd_verify_mdi',
    'SUMMARY_COLUMNS', 'summary_frame', 'summary_row', 'write_csv', 'write_json',
]
