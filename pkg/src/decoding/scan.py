"""
Soft cancellation (SCAN) decoding with CRC-free verification.

SCAN keeps two (n+1) x N message matrices on the polar factor graph:
L carries messages from the x-nodes towards the u-nodes, R carries
messages from the u-nodes towards the x-nodes. Row n is the u side in
natural index order; row 0 is the x side, holding the codeword in
bit-reversed order. One iteration visits the u-index pairs left to
right (N/2 rounds): the x-to-u pass computes exactly the L messages the
current pair needs and the u-to-x pass flushes the R messages back on
the way out of each sub-block.

After each iteration the overall u- and x-LLRs are sliced; the decoding
stops as soon as the decided message re-encodes to the decided codeword.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..coding.polar import CodeSpec, encode_block
from ..errors import CodeSpecError
from .base_decoder import BaseDecoder, DecodeOutcome, StateUpdater
from .llr import (
    ATANH_LIMIT,
    LLR_MAX,
    bias_probability,
    box_plus,
    channel_llrs,
    clamp_llr,
    hard_decision,
)

logger = logging.getLogger(__name__)


@dataclass
class LlrState:
    """
    Left/right message matrices of one SCAN decode.

    Attributes:
    -----------
    L: (n+1) x N messages towards the u-nodes; L[0] holds the channel LLRs
    R: (n+1) x N messages towards the x-nodes; R[n] holds the u priors
        (+LLR_MAX at frozen positions, 0 elsewhere)
    """
    L: np.ndarray
    R: np.ndarray


def init_llrs(y: np.ndarray, sigma2: np.ndarray, spec: CodeSpec) -> LlrState:
    """
    Seed the message matrices for a new decode.

    Parameters:
    -----------
    y: Received samples in codeword order
    sigma2: Per-symbol variance estimates in codeword order (floored
        at VAR_FLOOR before use)
    spec: The code being decoded

    Returns:
    --------
    LlrState: L[0] = 2y/sigma2 (clamped), R[n] = +LLR_MAX on frozen
        positions and 0 on information positions, all else 0
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (spec.N,):
        raise CodeSpecError(f"expected {spec.N} received samples, got shape {y.shape}")

    rows = spec.n + 1
    L = np.zeros((rows, spec.N))
    R = np.zeros((rows, spec.N))
    state = LlrState(L=L, R=R)
    refresh_channel_llrs(state, y, sigma2, spec)
    R[spec.n, spec.frozen_mask] = LLR_MAX
    return state


def refresh_channel_llrs(state: LlrState, y: np.ndarray, sigma2: np.ndarray, spec: CodeSpec) -> None:
    """Recompute row L[0] from new variance estimates; every other message persists."""
    state.L[0] = channel_llrs(y, sigma2)[spec.bit_reversal]


def _box_plus_scalar(a: float, b: float) -> float:
    # Same formula as llr.box_plus, on Python floats for the innermost kernels
    if min(abs(a), abs(b)) < ATANH_LIMIT:
        return _clamp_scalar(2.0 * math.atanh(math.tanh(0.5 * a) * math.tanh(0.5 * b)))
    sign = math.copysign(1.0, a) * math.copysign(1.0, b)
    value = (
        sign * min(abs(a), abs(b))
        + math.log1p(math.exp(-abs(a + b)))
        - math.log1p(math.exp(-abs(a - b)))
    )
    return max(-LLR_MAX, min(LLR_MAX, value))


def _clamp_scalar(value: float) -> float:
    return max(-LLR_MAX, min(LLR_MAX, value))


def _pair_round(L: np.ndarray, R: np.ndarray, level: int, start: int) -> None:
    # Innermost kernel: one round for the u pair (start, start + 1)
    child = level + 1
    l_up, l_lo = float(L[level, start]), float(L[level, start + 1])
    r_up, r_lo = float(R[child, start]), float(R[child, start + 1])

    L[child, start] = _box_plus_scalar(l_up, _clamp_scalar(l_lo + r_lo))
    L[child, start + 1] = _clamp_scalar(_box_plus_scalar(l_up, r_up) + l_lo)
    R[level, start] = _box_plus_scalar(r_up, _clamp_scalar(l_lo + r_lo))
    R[level, start + 1] = _clamp_scalar(_box_plus_scalar(l_up, r_up) + r_lo)


def _scan_node(L: np.ndarray, R: np.ndarray, level: int, start: int, size: int) -> None:
    # Sub-block [start, start + size) of row `level`; its kernel sits between
    # rows level and level + 1 and pairs i with i + size/2
    if size == 2:
        _pair_round(L, R, level, start)
        return

    half = size // 2
    child = level + 1
    upper = slice(start, start + half)
    lower = slice(start + half, start + size)

    # x-to-u towards the upper sub-block, using the lower R of the last pass
    L[child, upper] = box_plus(L[level, upper], clamp_llr(L[level, lower] + R[child, lower]))
    _scan_node(L, R, child, start, half)

    # x-to-u towards the lower sub-block, using the freshly returned upper R
    L[child, lower] = clamp_llr(box_plus(L[level, upper], R[child, upper]) + L[level, lower])
    _scan_node(L, R, child, start + half, half)

    # u-to-x on the way out
    R[level, upper] = box_plus(R[child, upper], clamp_llr(L[level, lower] + R[child, lower]))
    R[level, lower] = clamp_llr(box_plus(L[level, upper], R[child, upper]) + R[child, lower])


def scan_iteration(state: LlrState, spec: CodeSpec) -> LlrState:
    """
    Run one full SCAN iteration in place.

    After the call, L[n] holds the extrinsic u-LLRs and R[0] the
    extrinsic x-LLRs for every index.
    """
    _scan_node(state.L, state.R, 0, 0, spec.N)
    return state


def hard_decisions(state: LlrState, spec: CodeSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Slice the overall LLRs after an iteration.

    Returns:
    --------
    tuple: (u_hat, x_hat, p) where u_hat is in u order with frozen
        positions forced to 0, and x_hat and the bias probabilities
        p_i = 1 / (1 + exp(L[0,i] + R[0,i])) are in codeword order.
        An overall LLR of exactly 0 decides 0.
    """
    u_overall = state.L[spec.n] + state.R[spec.n]
    u_hat = hard_decision(u_overall)
    u_hat[spec.frozen_mask] = 0

    # Row 0 is bit-reversed codeword order; the reversal is an involution
    x_overall = (state.L[0] + state.R[0])[spec.bit_reversal]
    return u_hat, hard_decision(x_overall), bias_probability(x_overall)


def verify(u_hat: np.ndarray, x_hat: np.ndarray, spec: CodeSpec) -> bool:
    """
    CRC-free correctness check: u_hat * G_N must equal x_hat.

    A u_hat with a 1 on a frozen position is never consistent.
    """
    u_hat = np.asarray(u_hat)
    x_hat = np.asarray(x_hat)
    if u_hat.shape != (spec.N,) or x_hat.shape != (spec.N,):
        raise CodeSpecError(f"verification needs two blocks of {spec.N} bits")
    if u_hat[spec.frozen_mask].any():
        return False
    return bool(np.array_equal(encode_block(spec, u_hat), x_hat.astype(np.uint8)))


def scan_decode(
    spec: CodeSpec,
    y: np.ndarray,
    sigma2: np.ndarray,
    max_iters: int,
    state_updater: Optional[StateUpdater] = None,
) -> DecodeOutcome:
    """
    Iterative SCAN decoding with verification-based termination.

    Parameters:
    -----------
    spec: The code being decoded
    y: Received samples in codeword order
    sigma2: Initial variance estimates in codeword order (scalar allowed)
    max_iters: Iteration budget (>= 1)
    state_updater: Optional callback mapping the current bias
        probabilities to new variance estimates; when given it runs after
        every unverified iteration and only row L[0] is refreshed

    Returns:
    --------
    DecodeOutcome: the first verified decisions, or the last decisions
        with verified=False when the budget runs out
    """
    if max_iters < 1:
        raise CodeSpecError(f"max_iters must be >= 1, got {max_iters}")

    sigma2_hat = np.broadcast_to(np.asarray(sigma2, dtype=float), (spec.N,)).copy()
    state = init_llrs(y, sigma2_hat, spec)

    for iteration in range(1, max_iters + 1):
        scan_iteration(state, spec)
        u_hat, x_hat, p = hard_decisions(state, spec)
        if verify(u_hat, x_hat, spec):
            logger.debug("SCAN verified after %d iteration(s)", iteration)
            return DecodeOutcome(u_hat, x_hat, p, iteration, True, sigma2_hat)

        if state_updater is not None and iteration < max_iters:
            sigma2_hat = np.asarray(state_updater(p), dtype=float)
            refresh_channel_llrs(state, y, sigma2_hat, spec)

    logger.debug("SCAN budget of %d iteration(s) exhausted without verification", max_iters)
    return DecodeOutcome(u_hat, x_hat, p, max_iters, False, sigma2_hat)


class ScanDecoder(BaseDecoder):
    """
    SCAN decoder; with a state updater it becomes SWSCAN / W2SCAN.

    The decoder itself is estimator-agnostic: the caller supplies the
    per-iteration callback, which keeps transmission-order bookkeeping
    out of the message passing.
    """

    kind = "scan"

    def decode(
        self,
        y: np.ndarray,
        sigma2: np.ndarray,
        state_updater: Optional[StateUpdater] = None,
    ) -> DecodeOutcome:
        return scan_decode(self.spec, y, sigma2, self.max_iters, state_updater)
