"""
CSV report of a sweep.
"""

import logging
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from ..errors import ReportWriteError
from .sweep import COLUMNS, Metrics

logger = logging.getLogger(__name__)

# Six significant digits for every floating-point field
FLOAT_FORMAT = "%.6g"


def emit_report(
    metrics: Metrics,
    path: Optional[Union[str, Path]] = None,
    echo: bool = True,
) -> pd.DataFrame:
    """
    Write the metrics table as CSV and print it.

    Parameters:
    -----------
    metrics: Completed sweep metrics
    path: CSV destination; nothing is written when None
    echo: Print the table to standard output

    Returns:
    --------
    pd.DataFrame: The table that was written. Cells without a value
        (SC's false-positive rate, alpha of non-W2SCAN decoders) are empty.

    Raises:
    -------
    ReportWriteError: if the file cannot be written
    """
    frame = metrics.to_frame() if len(metrics) else pd.DataFrame(columns=COLUMNS)

    if path is not None:
        try:
            frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        except OSError as e:
            raise ReportWriteError(f"cannot write report to {path}: {e}")
        logger.info("wrote %d row(s) to %s", len(frame), path)

    if echo:
        print(frame.to_csv(index=False, float_format=FLOAT_FORMAT), end="")
    return frame
