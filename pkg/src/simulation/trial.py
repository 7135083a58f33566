"""
One Monte Carlo trial: a single transmission decoded by every decoder.

All decoders see the same message, channel realization and noise, so
their error indicators form paired samples.
"""

import time
from dataclasses import dataclass
from typing import List

import numpy as np

from ..channel.piecewise import sample_state_sequence, transmit
from ..coding.polar import CodeSpec, apply_tx_permutation, encode, invert_tx_permutation
from ..decoding.base_decoder import BaseDecoder, DecodeOutcome
from ..decoding.sc import SCDecoder
from ..decoding.scan import ScanDecoder
from ..estimation.estimator import ChannelStateEstimator, EstimatorKind
from .config import DecoderKind, DecoderSpec, SimConfig


@dataclass
class TrialRecord:
    """
    Outcome of one decoder on one trial.

    Attributes:
    -----------
    decoder: Series label of the decoder
    bit_errors: Information-bit errors
    frame_error: True when any information bit is wrong
    false_positive: True when verification passed on a wrong message
    verified: Verification status at exit (always False for SC)
    iterations: Iterations used
    wall_ms: Decoding wall time in milliseconds
    qp_fallbacks: Estimator updates that fell back to equal weights
    dominance_gap: Worst QP objective minus equal-weight objective
    """
    decoder: str
    bit_errors: int
    frame_error: bool
    false_positive: bool
    verified: bool
    iterations: int
    wall_ms: float
    qp_fallbacks: int = 0
    dominance_gap: float = 0.0


def make_decoder(decoder: DecoderSpec, spec: CodeSpec, max_iters: int) -> BaseDecoder:
    """Decoder instance for a series; the estimating kinds are SCAN plus a callback."""
    if decoder.kind is DecoderKind.SC:
        return SCDecoder(spec, max_iters=1)
    return ScanDecoder(spec, max_iters=max_iters)


def _decode(
    decoder: DecoderSpec,
    engine: BaseDecoder,
    spec: CodeSpec,
    y: np.ndarray,
    sigma_bar2: float,
    true_variances: np.ndarray,
):
    # Returns (outcome, estimator or None)
    initial = np.full(spec.N, sigma_bar2)
    if decoder.kind is DecoderKind.GENIE:
        return engine.decode(y, true_variances), None
    if decoder.kind in (DecoderKind.SWSCAN, DecoderKind.W2SCAN):
        estimator = ChannelStateEstimator(
            spec=spec, y=y, kind=EstimatorKind(decoder.kind.value), alpha=decoder.alpha
        )
        return engine.decode(y, initial, estimator), estimator
    return engine.decode(y, initial), None


def _record(decoder: DecoderSpec, spec: CodeSpec, info: np.ndarray, outcome: DecodeOutcome,
            wall_ms: float, estimator) -> TrialRecord:
    bit_errors = int(np.count_nonzero(spec.extract_info(outcome.u_hat) != info))
    verified = bool(outcome.verified) and decoder.verifies
    return TrialRecord(
        decoder=decoder.label,
        bit_errors=bit_errors,
        frame_error=bit_errors > 0,
        false_positive=verified and bit_errors > 0,
        verified=verified,
        iterations=int(outcome.iterations_used),
        wall_ms=wall_ms,
        qp_fallbacks=estimator.qp_fallbacks if estimator is not None else 0,
        dominance_gap=estimator.worst_dominance_gap if estimator is not None else 0.0,
    )


def run_trial(config: SimConfig, spec: CodeSpec, sigma_bar2: float,
              rng: np.random.Generator) -> List[TrialRecord]:
    """
    Run one trial at one noise point for every configured decoder.

    The message bits, the channel realization and the noise are drawn from
    `rng` in that order. Decoders start from the estimate sigma_bar2 for
    every symbol; the genie decoder receives the true variances instead.

    Returns:
    --------
    list: One TrialRecord per decoder, in configuration order
    """
    info = rng.integers(0, 2, size=spec.K, dtype=np.uint8)
    x_tx = apply_tx_permutation(spec, encode(spec, info))

    realization = sample_state_sequence(config.channel_params(sigma_bar2), spec.N, rng)
    y = invert_tx_permutation(spec, transmit(x_tx, realization, rng))
    true_variances = invert_tx_permutation(spec, realization.variances)

    records = []
    for decoder in config.decoders:
        engine = make_decoder(decoder, spec, config.max_iters)
        start = time.perf_counter()
        outcome, estimator = _decode(decoder, engine, spec, y, sigma_bar2, true_variances)
        wall_ms = (time.perf_counter() - start) * 1000.0
        records.append(_record(decoder, spec, info, outcome, wall_ms, estimator))
    return records
