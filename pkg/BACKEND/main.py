"""Main CLI Entry Point - Noise-Stable MDS."""

import sys
import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

LOGGING_CONFIG = {}


def setup_logging(log_file: str = None):
    """Setup logging configuration."""
    log_file = log_file or LOGGING_CONFIG.get('file', 'logs/nsmds.log')
    log_path = Path(log_file)
    log_path.parent.mkdir(parents=True, exist_ok=True)

    # stdout carries command output, so console logs go to stderr
    logging.basicConfig(
        level=getattr(logging, str(LOGGING_CONFIG.get('level', 'INFO')).upper(), logging.INFO),
        format=LOGGING_CONFIG.get('format', "%(asctime)s - %(name)s - %(levelname)s - %(message)s"),
        handlers=[
            RotatingFileHandler(
                log_file,
                maxBytes=int(LOGGING_CONFIG.get('max_file_size', 10485760)),
                backupCount=int(LOGGING_CONFIG.get('backup_count', 5)),
            ),
            logging.StreamHandler(sys.stderr)
        ]
    )


def main():
    """Main entry point."""
    try:
        from config import LOGGING_CONFIG as _lc
        LOGGING_CONFIG.update(_lc or {})
    except Exception:
        pass

    setup_logging()
    logger = logging.getLogger(__name__)

    from src.harness.cli import cli

    try:
        code = cli(sys.argv[1:])
    except Exception as e:
        logger.error(f"Error: {e}", exc_info=True)
        code = 1
    sys.exit(code)


if __name__ == "__main__":
    main()
