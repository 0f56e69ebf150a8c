#!/usr/bin/env python3
"""
afcmem - Atomic frequency comb quantum memory simulator

Simulates spectral tailoring of a rare-earth doped crystal, photon-echo
storage in the resulting comb, commensurate field choices and the RF
sequences that drive the pumping hardware.
"""
import logging
import sys

# Set up logging first
from src.core.logging_config import setup_logging
setup_logging(log_level=logging.INFO)
logger = logging.getLogger(__name__)

from src.cli import main as cli_main  # noqa: E402


def main():
    """Main entry point"""
    try:
        sys.exit(cli_main())
    except Exception:
        logger.exception("Fatal error")
        raise


if __name__ == "__main__":
    main()
