"""
Successive cancellation (SC) decoding.

The recursion works on the decoding graph whose leaves are u_1..u_N in
natural order and whose root holds the codeword LLRs in bit-reversed
order (x = u B_N F^(kron n) = (u F^(kron n)) B_N).
"""

from typing import Optional, Tuple

import numpy as np

from ..coding.polar import CodeSpec
from ..errors import CodeSpecError
from .base_decoder import BaseDecoder, DecodeOutcome, StateUpdater
from .llr import bias_probability, box_plus, channel_llrs, clamp_llr, hard_decision


def _sc_node(llr: np.ndarray, frozen: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # Returns (u decisions, re-encoded partial sums) for one sub-block
    if llr.size == 1:
        bit = np.zeros(1, dtype=np.uint8) if frozen[0] else (llr < 0).astype(np.uint8)
        return bit, bit

    half = llr.size // 2
    upper, lower = llr[:half], llr[half:]

    # f: the upper child sees the XOR of both halves
    u_left, x_left = _sc_node(box_plus(upper, lower), frozen[:half])
    # g: the lower child, with the upper partial sum cancelled
    signs = 1.0 - 2.0 * x_left
    u_right, x_right = _sc_node(clamp_llr(lower + signs * upper), frozen[half:])

    return np.concatenate([u_left, u_right]), np.concatenate([x_left ^ x_right, x_right])


def sc_decode(spec: CodeSpec, channel_llrs: np.ndarray) -> np.ndarray:
    """
    Decode one block with successive cancellation.

    Parameters:
    -----------
    spec: The code being decoded
    channel_llrs: Length-N channel LLRs in codeword (pre-permutation) order

    Returns:
    --------
    np.ndarray: Full-length u-hat (uint8); frozen positions are 0. Use
        spec.extract_info to obtain the K information bits.
    """
    llrs = np.asarray(channel_llrs, dtype=float)
    if llrs.shape != (spec.N,):
        raise CodeSpecError(f"expected {spec.N} channel LLRs, got shape {llrs.shape}")
    u_hat, _ = _sc_node(clamp_llr(llrs[spec.bit_reversal]), spec.frozen_mask)
    return u_hat


def genie_bit_llrs(channel_llrs: np.ndarray) -> np.ndarray:
    """
    Genie-aided SC decision LLRs of the all-zero codeword, for a batch.

    With every previous bit fed back correctly as 0, the g-function reduces
    to a plain sum, so all N decision LLRs can be computed for a whole
    batch of received blocks at once.

    Parameters:
    -----------
    channel_llrs: (batch, N) channel LLRs of transmissions of the zero word

    Returns:
    --------
    np.ndarray: (batch, N) decision LLRs for u_1..u_N; a negative value
        is a decision error
    """
    llrs = np.asarray(channel_llrs, dtype=float)
    if llrs.shape[-1] == 1:
        return llrs
    half = llrs.shape[-1] // 2
    upper, lower = llrs[..., :half], llrs[..., half:]
    return np.concatenate(
        [genie_bit_llrs(box_plus(upper, lower)), genie_bit_llrs(clamp_llr(upper + lower))],
        axis=-1,
    )


class SCDecoder(BaseDecoder):
    """
    SC decoding with fixed variance estimates.

    SC has no verification rule, so outcomes are never marked verified;
    x_hat and p are the hard decisions and bias probabilities of the
    channel LLRs alone.
    """

    kind = "sc"

    def decode(
        self,
        y: np.ndarray,
        sigma2: np.ndarray,
        state_updater: Optional[StateUpdater] = None,
    ) -> DecodeOutcome:
        llrs = channel_llrs(y, sigma2)
        return DecodeOutcome(
            u_hat=sc_decode(self.spec, llrs),
            x_hat=hard_decision(llrs),
            p=bias_probability(llrs),
            iterations_used=1,
            verified=False,
            sigma2_hat=np.asarray(sigma2, dtype=float),
        )
