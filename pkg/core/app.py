"""
CLI Application Setup
Handles logging configuration and command registration
"""

import logging
import sys
from pathlib import Path

import click

# Add parent directory to path for imports
sys.path.append(str(Path(__file__).parent.parent))

import config
from api.commands import commands
from utils.file_io import ensure_directories


def setup_logging(level: str = None, log_file: Path = None) -> None:
    """Console plus file logging, same format everywhere"""
    level = (level or config.LOG_LEVEL).upper()
    handlers = [logging.StreamHandler(sys.stderr)]
    try:
        handlers.append(logging.FileHandler(log_file or config.LOG_FILE))
    except OSError:
        pass
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def create_cli() -> click.Group:
    """Create and configure the command group"""

    @click.group(name=config.APP_NAME, help="Solve anyon F-symbols and explore braid-group gates")
    @click.version_option(config.APP_VERSION, prog_name=config.APP_NAME)
    @click.option('--log-level', default=None, help='Logging level (default from LOG_LEVEL)')
    def cli(log_level):
        setup_logging(log_level)
        ensure_directories()

    for command in commands:
        cli.add_command(command)
    return cli
