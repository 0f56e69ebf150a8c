"""
Core module for the AFC memory simulator

Contains logging, error types, config loading and output staging.
"""
from .errors import (
    AFCError, AliasingError, CompileError, ConfigError, GridRangeError,
    OutputError, RegimeError, UnderResolvedError,
)
from .logging_config import get_logger, setup_logging
from .output import StagedOutput
from .settings import ConfigDocument, config_dir, load_document, parse_document, validate_model

__all__ = [
    'AFCError', 'AliasingError', 'CompileError', 'ConfigError', 'GridRangeError',
    'OutputError', 'RegimeError', 'UnderResolvedError',
    'get_logger', 'setup_logging', 'StagedOutput',
    'ConfigDocument', 'config_dir', 'load_document', 'parse_document', 'validate_model',
]
