"""
Monte Carlo construction of polar codes and the code-spec file format.

Virtual sub-channels are ranked by the bit error counts of genie-aided
SC decoding of the all-zero codeword over a stationary AWGN channel with
the mean noise variance. The codec is unaware of the non-stationarity
at construction time, and on a stationary channel neither the bit
reversal of the channel side nor the transmission permutation changes
the statistics, so both are skipped here.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from tqdm import tqdm

from ..decoding.llr import channel_llrs
from ..decoding.sc import genie_bit_llrs
from ..errors import CodeSpecError
from .polar import CodeSpec

logger = logging.getLogger(__name__)

# Trials simulated per vectorized batch
_BATCH_SIZE = 1000


@dataclass
class ReliabilityOrder:
    """
    Ranking of virtual sub-channels.

    Attributes:
    -----------
    error_counts: Per-index bit error counts over all construction trials
    order: 0-based indices sorted by error count, best first; ties keep
        the lower index first
    trials: Number of trials the counts were gathered over
    """
    error_counts: np.ndarray
    order: np.ndarray
    trials: int

    @classmethod
    def from_counts(cls, error_counts: np.ndarray, trials: int) -> "ReliabilityOrder":
        counts = np.asarray(error_counts, dtype=np.int64)
        return cls(error_counts=counts, order=np.argsort(counts, kind="stable"), trials=trials)

    @property
    def bit_error_rates(self) -> np.ndarray:
        return self.error_counts / max(self.trials, 1)


def construct_code_monte_carlo(
    n: int,
    K: int,
    sigma_bar2: float,
    trials: int,
    seed: int,
    perm_seed: Optional[int] = None,
    progress: bool = False,
) -> Tuple[CodeSpec, ReliabilityOrder]:
    """
    Construct an (N, K) polar code by Monte Carlo simulation.

    Parameters:
    -----------
    n: Number of polarization levels (N = 2^n)
    K: Number of information bits
    sigma_bar2: Noise variance of the stationary design channel (> 0)
    trials: Number of simulated transmissions (>= 1)
    seed: Seed of the construction noise
    perm_seed: Seed of the transmission permutation; defaults to `seed`
    progress: Show a tqdm progress bar over batches

    Returns:
    --------
    tuple: (CodeSpec using the K best sub-channels, ReliabilityOrder)
    """
    if trials < 1:
        raise CodeSpecError(f"construction needs at least one trial, got {trials}")
    if not sigma_bar2 > 0:
        raise CodeSpecError(f"design noise variance must be > 0, got {sigma_bar2}")
    if n < 1:
        raise CodeSpecError(f"level count n must be >= 1, got {n}")

    N = 1 << n
    rng = np.random.default_rng(seed)
    sigma = np.sqrt(sigma_bar2)
    error_counts = np.zeros(N, dtype=np.int64)

    batches = range(0, trials, _BATCH_SIZE)
    for start in tqdm(batches, desc="construct", unit="batch", disable=not progress):
        size = min(_BATCH_SIZE, trials - start)
        # All-zero codeword: every symbol is +1
        y = 1.0 + sigma * rng.standard_normal((size, N))
        decision_llrs = genie_bit_llrs(channel_llrs(y, sigma_bar2))
        error_counts += (decision_llrs < 0).sum(axis=0)

    reliability = ReliabilityOrder.from_counts(error_counts, trials)
    perm_seed = seed if perm_seed is None else perm_seed
    spec = CodeSpec.from_reliability(n, K, reliability.order, perm_seed)

    logger.info(
        "constructed N=%d K=%d at sigma_bar2=%g over %d trials (worst index %d, %d errors)",
        N, K, sigma_bar2, trials, reliability.order[-1] + 1, error_counts.max(),
    )
    return spec, reliability


def write_code_spec(path: Union[str, Path], spec: CodeSpec, order: np.ndarray) -> None:
    """
    Write a code-spec file.

    Format (1-based indices, space separated):
        line 1: n K perm_seed
        line 2: reliability order, best first
        line 3: transmission permutation pi(1..N)
    """
    order = np.asarray(order, dtype=np.int64)
    if not np.array_equal(np.sort(order[: spec.K]), spec.info_set):
        raise CodeSpecError("the K best entries of the order must be the information set")
    lines = [
        f"{spec.n} {spec.K} {spec.perm_seed}",
        " ".join(str(i + 1) for i in order),
        " ".join(str(i + 1) for i in spec.tx_perm),
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("wrote code spec %s (fingerprint %s)", path, spec.fingerprint())


def read_code_spec(path: Union[str, Path]) -> Tuple[CodeSpec, np.ndarray]:
    """
    Read a code-spec file written by write_code_spec.

    Returns:
    --------
    tuple: (CodeSpec, 0-based reliability order)

    Raises:
    -------
    CodeSpecError: if the file is malformed
    """
    try:
        lines = [line for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]
    except OSError as e:
        raise CodeSpecError(f"cannot read code spec {path}: {e}")
    if len(lines) != 3:
        raise CodeSpecError(f"{path}: expected 3 non-empty lines, found {len(lines)}")

    try:
        n, K, perm_seed = (int(token) for token in lines[0].split())
        order = np.array([int(token) - 1 for token in lines[1].split()], dtype=np.int64)
        tx_perm = np.array([int(token) - 1 for token in lines[2].split()], dtype=np.int64)
    except ValueError as e:
        raise CodeSpecError(f"{path}: malformed code spec ({e})")

    N = 1 << n
    if not np.array_equal(np.sort(order), np.arange(N)):
        raise CodeSpecError(f"{path}: reliability order is not a permutation of 1..{N}")
    return CodeSpec.from_reliability(n, K, order, perm_seed, tx_perm=tx_perm), order
