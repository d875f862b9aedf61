import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Every package logger hangs below these module names.
_PACKAGES = ("core", "geometry", "directions", "measures", "generators", "lattice", "energy", "gaps",
             "verification", "cli", "main")


def configure_logging(level: str = "INFO") -> None:
    """
    PURPOSE: Install the favlab stream handler
    DESCRIPTION: Attaches a single stderr handler to every package logger and sets the level.
    Calling it twice replaces the handler instead of duplicating output.
    ARGUMENTS:
        level: str - Logging level name (DEBUG, INFO, WARNING, ...)
    CONTRACTS:
        RAISES:
            - ValueError - when level is not a known logging level name
    """
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        raise ValueError(f"unknown log level {level!r}")
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    for name in _PACKAGES:
        package_logger = logging.getLogger(name)
        for old in list(package_logger.handlers):
            package_logger.removeHandler(old)
        package_logger.addHandler(handler)
        package_logger.setLevel(numeric)
        package_logger.propagate = False
