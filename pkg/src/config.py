"""Environment-driven settings shared by the CLI and the API."""

import logging
import os
from pathlib import Path


def default_tolerance() -> float:
    return float(os.getenv("FUSIONKIT_TOLERANCE", "1e-9"))


def default_seed() -> int:
    return int(os.getenv("FUSIONKIT_SEED", "0"))


def data_dir() -> Path:
    return Path(os.getenv("FUSIONKIT_DATA_DIR", "data"))


def log_level(default: str = "WARNING") -> str:
    return os.getenv("FUSIONKIT_LOG_LEVEL", default).upper()


def configure_logging(default: str = "WARNING") -> None:
    """Send log records to stderr; stdout is reserved for reports."""
    logging.basicConfig(
        level=log_level(default),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
