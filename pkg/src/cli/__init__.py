"""
CLI module

Config-driven subcommands writing CSV, JSON and PNG outputs.
"""
from .commands import (
    COMMANDS, cmd_commensurate, cmd_compile, cmd_holeburn, cmd_pump, cmd_store, cmd_sweep,
    run_pump, run_store_config,
)
from .config import RunConfig, find_config, load_config, parse_config, with_override
from .main import build_parser, main

__all__ = [
    'COMMANDS', 'cmd_commensurate', 'cmd_compile', 'cmd_holeburn', 'cmd_pump', 'cmd_store',
    'cmd_sweep', 'run_pump', 'run_store_config',
    'RunConfig', 'find_config', 'load_config', 'parse_config', 'with_override',
    'build_parser', 'main',
]
