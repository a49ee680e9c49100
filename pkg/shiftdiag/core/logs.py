####################################################################################################
#                                             logs.py                                              #
####################################################################################################
#                                                                                                  #
# Purpose: One place that wires the ``shiftdiag`` logger hierarchy to a handler. Library modules   #
#          only ever call ``logging.getLogger(__name__)``; the CLI calls ``setup_log`` once.       #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

import logging
import sys
from typing import TextIO

LOG_NAME = "shiftdiag"


def setup_log(level: int = logging.WARNING, stream: TextIO | None = None,
              log_file: str | None = None) -> logging.Logger:
    """Configure and return the package logger.

    Diagnostics go to the error stream so that machine output on stdout stays
    parseable. Calling this twice replaces the previous handler instead of
    stacking a second one.
    """
    formatter = logging.Formatter('(%(asctime)s) %(levelname)s %(name)s: %(message)s',
                                  datefmt='%m/%d/%Y %I:%M:%S %p')

    if log_file is not None:
        handler: logging.Handler = logging.FileHandler(log_file)
    else:
        handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    handler.setFormatter(formatter)

    logger = logging.getLogger(LOG_NAME)
    for old in list(logger.handlers):
        logger.removeHandler(old)
    logger.setLevel(level)
    logger.addHandler(handler)
    logger.propagate = False
    return logger


def level_from_flags(verbose: bool = False, quiet: bool = False) -> int:
    if quiet:
        return logging.ERROR
    if verbose:
        return logging.INFO
    return logging.WARNING
