"""
Monte Carlo sweeps over noise points and decoders.

Every trial draws from its own generator, seeded by (master seed, noise
point index, trial index). Trials can therefore be split into chunks and
run in any order or in separate processes without changing a single
count.
"""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..channel.capacity import eb_n0_db
from .config import DecoderKind, DecoderSpec, SimConfig
from .trial import TrialRecord, run_trial

logger = logging.getLogger(__name__)

# Column order of the metrics table and of the CSV report
COLUMNS = [
    "sigma_bar2", "eb_n0_db", "decoder", "alpha", "trials",
    "ber", "fer", "fpr", "avg_iters", "wall_ms",
]

# Chunks per worker; more chunks give a smoother progress bar
_CHUNKS_PER_WORKER = 4


def trial_rng(seed: int, sigma_index: int, trial_index: int) -> np.random.Generator:
    """Generator of one trial, independent of where and when it runs."""
    return np.random.default_rng(np.random.SeedSequence([seed, sigma_index, trial_index]))


@dataclass
class MetricsCell:
    """
    Counters for one (noise point, decoder) pair.

    Attributes:
    -----------
    sigma_bar2: Nominal noise variance
    decoder: Decoder series
    info_bits: Information bits per frame (K)
    trials: Trials counted
    bit_errors: Information-bit errors
    frame_errors: Frames with at least one bit error
    false_positives: Wrong frames that passed verification
    unverified_frame_errors: Wrong frames that never passed verification
    iterations: Total iterations
    wall_ms: Total decoding time
    qp_fallbacks: Estimator updates that used equal weights after a QP failure
    worst_dominance_gap: Largest QP objective minus equal-weight objective
    """
    sigma_bar2: float
    decoder: DecoderSpec
    info_bits: int
    trials: int = 0
    bit_errors: int = 0
    frame_errors: int = 0
    false_positives: int = 0
    unverified_frame_errors: int = 0
    iterations: int = 0
    wall_ms: float = 0.0
    qp_fallbacks: int = 0
    worst_dominance_gap: float = 0.0

    def add(self, record: TrialRecord) -> None:
        self.trials += 1
        self.bit_errors += record.bit_errors
        self.frame_errors += int(record.frame_error)
        self.false_positives += int(record.false_positive)
        self.unverified_frame_errors += int(record.frame_error and not record.verified)
        self.iterations += record.iterations
        self.wall_ms += record.wall_ms
        self.qp_fallbacks += record.qp_fallbacks
        self.worst_dominance_gap = max(self.worst_dominance_gap, record.dominance_gap)

    def merge(self, other: "MetricsCell") -> None:
        self.trials += other.trials
        self.bit_errors += other.bit_errors
        self.frame_errors += other.frame_errors
        self.false_positives += other.false_positives
        self.unverified_frame_errors += other.unverified_frame_errors
        self.iterations += other.iterations
        self.wall_ms += other.wall_ms
        self.qp_fallbacks += other.qp_fallbacks
        self.worst_dominance_gap = max(self.worst_dominance_gap, other.worst_dominance_gap)

    @property
    def ber(self) -> float:
        bits = self.trials * self.info_bits
        return self.bit_errors / bits if bits else 0.0

    @property
    def fer(self) -> float:
        return self.frame_errors / self.trials if self.trials else 0.0

    @property
    def fpr(self) -> Optional[float]:
        """False-positive rate; None for decoders without verification."""
        if not self.decoder.verifies:
            return None
        return self.false_positives / self.trials if self.trials else 0.0

    @property
    def avg_iters(self) -> float:
        return self.iterations / self.trials if self.trials else 0.0

    def row(self) -> Dict[str, Any]:
        return {
            "sigma_bar2": self.sigma_bar2,
            "eb_n0_db": eb_n0_db(self.sigma_bar2),
            "decoder": self.decoder.kind.value,
            "alpha": self.decoder.alpha if self.decoder.kind is DecoderKind.W2SCAN else None,
            "trials": self.trials,
            "ber": self.ber,
            "fer": self.fer,
            "fpr": self.fpr,
            "avg_iters": self.avg_iters,
            "wall_ms": self.wall_ms,
        }


class Metrics:
    """
    Metrics table of a sweep, one cell per (noise point, decoder).

    Cells are kept in sweep order: noise points outer, decoders inner.
    """

    def __init__(self, cells: Optional[List[MetricsCell]] = None):
        self._cells: Dict[Tuple[float, str], MetricsCell] = {}
        for cell in cells or []:
            self._cells[(cell.sigma_bar2, cell.decoder.label)] = cell

    @classmethod
    def empty(cls, config: SimConfig) -> "Metrics":
        return cls([
            MetricsCell(sigma_bar2=sigma_bar2, decoder=decoder, info_bits=config.spec.K)
            for sigma_bar2 in config.sigma_bar2s
            for decoder in config.decoders
        ])

    def __len__(self) -> int:
        return len(self._cells)

    def __iter__(self):
        return iter(self._cells.values())

    def cell(self, sigma_bar2: float, label: str) -> MetricsCell:
        return self._cells[(float(sigma_bar2), label)]

    def merge(self, cells: List[MetricsCell]) -> None:
        for cell in cells:
            self._cells[(cell.sigma_bar2, cell.decoder.label)].merge(cell)

    def to_frame(self) -> pd.DataFrame:
        """Metrics as a DataFrame with the report columns."""
        frame = pd.DataFrame([cell.row() for cell in self], columns=COLUMNS)
        return frame.astype({"trials": "int64"})

    def get_statistics(self) -> Dict[str, Any]:
        """Aggregate counters across all cells."""
        cells = list(self)
        return {
            "cells": len(cells),
            "trials": sum(cell.trials for cell in cells),
            "frame_errors": sum(cell.frame_errors for cell in cells),
            "false_positives": sum(cell.false_positives for cell in cells),
            "qp_fallbacks": sum(cell.qp_fallbacks for cell in cells),
            "worst_dominance_gap": max((cell.worst_dominance_gap for cell in cells), default=0.0),
        }


def run_trials(config: SimConfig, sigma_index: int, start: int, stop: int) -> List[MetricsCell]:
    """
    Run trials [start, stop) of one noise point.

    Module-level so that worker processes can unpickle it.

    Returns:
    --------
    list: One partial MetricsCell per decoder
    """
    sigma_bar2 = config.sigma_bar2s[sigma_index]
    cells = {
        decoder.label: MetricsCell(sigma_bar2=sigma_bar2, decoder=decoder, info_bits=config.spec.K)
        for decoder in config.decoders
    }
    for trial_index in range(start, stop):
        rng = trial_rng(config.seed, sigma_index, trial_index)
        for record in run_trial(config, config.spec, sigma_bar2, rng):
            cells[record.decoder].add(record)
    return list(cells.values())


def _chunks(config: SimConfig) -> List[Tuple[int, int, int]]:
    chunk = max(1, -(-config.trials // (config.workers * _CHUNKS_PER_WORKER)))
    return [
        (sigma_index, start, min(start + chunk, config.trials))
        for sigma_index in range(len(config.sigma_bar2s))
        for start in range(0, config.trials, chunk)
    ]


def run_sweep(config: SimConfig) -> Metrics:
    """
    Run every (noise point, decoder) cell of a sweep.

    With config.workers > 1 the trial chunks run in a process pool. The
    counters are identical to a sequential run.

    Returns:
    --------
    Metrics: the filled metrics table
    """
    metrics = Metrics.empty(config)
    chunks = _chunks(config)
    total = config.trials * len(config.sigma_bar2s)
    logger.info(
        "sweep: %d noise point(s) x %d decoder(s), %d trials each, %d worker(s)",
        len(config.sigma_bar2s), len(config.decoders), config.trials, config.workers,
    )

    with tqdm(total=total, desc="simulate", unit="trial", disable=not config.progress) as bar:
        if config.workers == 1:
            for sigma_index, start, stop in chunks:
                metrics.merge(run_trials(config, sigma_index, start, stop))
                bar.update(stop - start)
        else:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                futures = {
                    pool.submit(run_trials, config, sigma_index, start, stop): stop - start
                    for sigma_index, start, stop in chunks
                }
                for future in as_completed(futures):
                    metrics.merge(future.result())
                    bar.update(futures[future])

    statistics = metrics.get_statistics()
    if statistics["qp_fallbacks"]:
        logger.warning("%d QP fallback(s) to equal weights during the sweep", statistics["qp_fallbacks"])
    logger.info("sweep done: %s", statistics)
    return metrics
