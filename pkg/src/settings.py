"""
Environment-driven settings for the simulator.

Values are read from the process environment after loading an optional
.env file from the working directory (see .env.template). Command-line
flags take precedence over anything defined here.
"""

import os  # For environment variables
from dataclasses import dataclass  # For the immutable settings record
from typing import Optional  # For type hints

from dotenv import load_dotenv  # For loading variables from a .env file

from .errors import SimConfigError


@dataclass(frozen=True)
class Settings:
    """
    Process-wide defaults.

    Attributes:
    -----------
    log_level: Root logger level name used by the CLI (e.g. "INFO", "DEBUG")
    workers: Number of worker processes for sweeps (1 = run in-process)
    construction_trials: Default Monte Carlo trial count for code construction
    """
    log_level: str = "INFO"
    workers: int = 1
    construction_trials: int = 10_000


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise SimConfigError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise SimConfigError(f"{name} must be >= 1, got {value}")
    return value


def load_settings(env_file: Optional[str] = None) -> Settings:
    """
    Build Settings from the environment.

    Parameters:
    -----------
    env_file: Optional explicit path to a .env file; when omitted,
        python-dotenv searches the working directory

    Returns:
    --------
    Settings: defaults overridden by any POLAR_SIM_* variables found
    """
    # Existing environment variables win over the .env file
    load_dotenv(dotenv_path=env_file, override=False)

    return Settings(
        log_level=os.getenv("POLAR_SIM_LOG_LEVEL", Settings.log_level).upper(),
        workers=_int_from_env("POLAR_SIM_WORKERS", Settings.workers),
        construction_trials=_int_from_env(
            "POLAR_SIM_CONSTRUCTION_TRIALS", Settings.construction_trials
        ),
    )
