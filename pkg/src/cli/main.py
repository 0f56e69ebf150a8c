"""
Command-line entry point

    python main.py store --config fig2_efficient --out out/fig2 --seed 1
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from ..core.errors import AFCError, ConfigError
from ..core.logging_config import get_logger
from .commands import COMMANDS
from .config import load_config

logger = get_logger(__name__)

DESCRIPTIONS = {
    'holeburn': "single-burn hole/anti-hole spectrum",
    'pump': "tailor a comb with the pumping model",
    'store': "storage run: pump, wait, propagate, count",
    'commensurate': "mismatch map and commensurate field search",
    'compile': "compile the pump target to an RF schedule",
    'sweep': "repeat store or pump over one parameter",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afcmem", description="Atomic frequency comb memory simulator",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    parser.add_argument("--log-level", default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in DESCRIPTIONS.items():
        cmd = sub.add_parser(name, help=help_text, description=help_text,
                             formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        cmd.add_argument("--config", required=True,
                         help="config file, or a name under config/experiments")
        cmd.add_argument("--out", type=Path, default=None,
                         help="output directory (overrides the config)")
        cmd.add_argument("--seed", type=int, default=None, help="random seed (overrides the config)")
        cmd.add_argument("--threads", type=int, default=1, help="worker threads")
    return parser


def run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    updates = {}
    if args.seed is not None:
        updates['seed'] = args.seed
    if args.out is not None:
        updates['out'] = args.out
    if updates:
        config = config.model_copy(update=updates)
    if args.threads < 1:
        raise ConfigError([f"--threads must be >= 1, got {args.threads}"])
    logger.info(f"Running {args.command} ({args.config}) -> {config.out}")
    COMMANDS[args.command](config, config.out, threads=args.threads)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments and run one subcommand; 2 on any simulator error"""
    args = build_parser().parse_args(argv)
    logging.getLogger().setLevel(getattr(logging, args.log_level))
    try:
        return run(args)
    except ConfigError as e:
        for problem in e.problems:
            print(f"error: {problem}", file=sys.stderr)
        logger.error(f"{args.command}: invalid configuration")
        return 2
    except AFCError as e:
        print(f"error: {e}", file=sys.stderr)
        logger.error(f"{args.command}: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
