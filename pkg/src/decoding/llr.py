"""
Log-likelihood-ratio primitives shared by all decoders.

Messages are LLRs ln(W(y|0) / W(y|1)). The likelihood-ratio operation
a*b = (ab + 1) / (a + b) of the factor-graph kernels becomes the box-plus
operation in the log domain; +infinity (a frozen bit known to be 0) is
represented by the finite surrogate LLR_MAX.
"""

import numpy as np
from scipy.special import expit  # Numerically stable logistic function

# Finite stand-in for an infinite LLR; exp(40) dwarfs any channel LLR
LLR_MAX = 40.0

# Lower bound applied to variance estimates before forming channel LLRs
VAR_FLOOR = 1e-6

# Below this magnitude box_plus uses the atanh form
ATANH_LIMIT = 5.0


def clamp_llr(llr):
    """Clip LLRs to [-LLR_MAX, LLR_MAX]."""
    return np.clip(llr, -LLR_MAX, LLR_MAX)


def box_plus(a, b):
    """
    Exact box-plus of two LLRs (the log-domain image of a*b).

    Small inputs use 2*atanh(tanh(a/2)*tanh(b/2)) directly. Once both
    magnitudes reach ATANH_LIMIT the product of tanh terms saturates, and
    the value is taken as sign(a)sign(b)min(|a|,|b|) plus a correction
    term, which cancels badly near zero but is exact in that range.

    Parameters:
    -----------
    a, b: LLR scalars or broadcastable arrays

    Returns:
    --------
    LLR(s) of the XOR of the two bits, clipped to +/-LLR_MAX
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    magnitude = np.minimum(np.abs(a), np.abs(b))
    small = magnitude < ATANH_LIMIT
    # Saturated products give inf here; np.where drops those entries
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = 2.0 * np.arctanh(np.tanh(a / 2.0) * np.tanh(b / 2.0))
    correction = np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b)))
    split = np.sign(a) * np.sign(b) * magnitude + correction
    return clamp_llr(np.where(small, direct, split))


def channel_llrs(y, sigma2):
    """
    Channel LLRs 2*y / sigma^2 for BPSK (0 -> +1, 1 -> -1) over AWGN.

    Variances below VAR_FLOOR are raised to the floor so that noiseless
    pieces produce saturated, finite LLRs.
    """
    variance = np.maximum(np.asarray(sigma2, dtype=float), VAR_FLOOR)
    return clamp_llr(2.0 * np.asarray(y, dtype=float) / variance)


def bias_probability(llr):
    """Probability that a bit equals 1 given its overall LLR: 1 / (1 + e^llr)."""
    return expit(-np.asarray(llr, dtype=float))


def hard_decision(llr) -> np.ndarray:
    """Bit 1 for strictly negative LLRs, 0 otherwise (an LLR of 0 decides 0)."""
    return (np.asarray(llr) < 0).astype(np.uint8)
