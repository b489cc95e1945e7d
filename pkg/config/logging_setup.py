import sys
import logging
from typing import Optional

from config.config import LOG_LEVEL


def configure_logging(level: Optional[str] = None) -> None:
    """Send log records to stderr so CSV written to stdout stays clean."""
    logging.basicConfig(
        level=(level or LOG_LEVEL).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
