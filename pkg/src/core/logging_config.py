"""
Logging Configuration

Sets up Python logging with rotating file handler for the simulator.
"""
import logging
import logging.handlers
import os
from pathlib import Path
from typing import Union


def default_log_dir() -> Path:
    """Log directory: $AFCMEM_LOG_DIR or ~/.config/afcmem/logs"""
    env = os.environ.get("AFCMEM_LOG_DIR")
    if env:
        return Path(env)
    return Path.home() / ".config" / "afcmem" / "logs"


def setup_logging(log_dir: Union[Path, None, bool] = None, log_level: int = logging.INFO):
    """
    Set up application-wide logging with rotating file handler.

    Args:
        log_dir: Directory for log files (defaults to default_log_dir()).
            Pass False to log to the console only.
        log_level: Logging level (default: INFO)

    Returns:
        The configured root logger
    """
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)

    # Re-running setup (one process, several CLI invocations in tests) must not stack handlers
    for handler in list(root_logger.handlers):
        if getattr(handler, "_afcmem", False):
            root_logger.removeHandler(handler)
            handler.close()

    if log_dir is not False:
        log_dir = Path(log_dir) if log_dir else default_log_dir()
        log_dir.mkdir(parents=True, exist_ok=True)

        # 10MB max, keep 5 backup files
        file_handler = logging.handlers.RotatingFileHandler(
            log_dir / "afcmem.log",
            maxBytes=10 * 1024 * 1024,
            backupCount=5,
            encoding='utf-8'
        )
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        file_handler._afcmem = True
        root_logger.addHandler(file_handler)

    # Only warnings and errors to console
    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.WARNING)
    console_handler.setFormatter(formatter)
    console_handler._afcmem = True
    root_logger.addHandler(console_handler)

    # Third-party chatter
    logging.getLogger('numexpr').setLevel(logging.WARNING)

    return root_logger


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance for a module.

    Args:
        name: Logger name (usually __name__)

    Returns:
        Logger instance
    """
    return logging.getLogger(name)
