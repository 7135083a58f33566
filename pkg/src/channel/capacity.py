"""
Capacity analytics for the piecewise-stationary channel.

Two bounds are computed for a channel whose state is unknown to the
decoder: the genie capacity, averaging the capacities of the individual
states, and the capacity of the equivalent stationary channel, which
averages the channel parameter first. For the BSC, concavity of the binary
entropy makes the genie capacity the larger of the two. The BI-AWGN
capacity is not concave in the noise variance near zero, so at low noise
(S = {0, 0.1, 0.2}) the stationary bound can exceed the genie bound.
"""

import logging
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy import integrate  # Adaptive quadrature
from scipy.special import entr, expit  # entr(p) = -p ln p, with entr(0) = 0
from scipy.stats import norm  # Gaussian densities

from ..errors import CapacityIntegrationError, ChannelParamsError
from .piecewise import ChannelParams

logger = logging.getLogger(__name__)

# Absolute tolerance of the capacity integral
QUADRATURE_TOLERANCE = 1e-6

# Integration range around the two BPSK symbols, in noise standard deviations
_INTEGRATION_SPAN = 10.0


class CapacityBounds(NamedTuple):
    """Genie capacity (state known) and equivalent-stationary capacity, in bits."""
    genie: float
    stationary: float


def binary_entropy(p):
    """Binary entropy in bits; H(0) = H(1) = 0."""
    p = np.asarray(p, dtype=float)
    return (entr(p) + entr(1.0 - p)) / np.log(2.0)


def bsc_capacity(crossover: float) -> float:
    """
    Capacity 1 - H(eps) of a binary symmetric channel.

    Raises:
    -------
    ChannelParamsError: if eps lies outside [0, 1]
    """
    if not 0.0 <= crossover <= 1.0:
        raise ChannelParamsError(f"crossover probability must lie in [0, 1], got {crossover}")
    return float(1.0 - binary_entropy(crossover))


def bsc_capacities(
    crossovers: Sequence[float],
    probabilities: Optional[Sequence[float]] = None,
) -> CapacityBounds:
    """
    Both capacity bounds for a piecewise-stationary BSC.

    Parameters:
    -----------
    crossovers: Crossover probability of each state
    probabilities: State probabilities (uniform when omitted)

    Returns:
    --------
    CapacityBounds: (sum_s p(s) C(eps(s)), C(sum_s p(s) eps(s)))
    """
    crossovers = np.asarray(crossovers, dtype=float)
    if probabilities is None:
        weights = np.full(crossovers.size, 1.0 / crossovers.size)
    else:
        weights = np.asarray(probabilities, dtype=float)
        if weights.shape != crossovers.shape:
            raise ChannelParamsError("one probability per crossover state is required")
    genie = sum(w * bsc_capacity(eps) for w, eps in zip(weights, crossovers))
    return CapacityBounds(genie=float(genie), stationary=bsc_capacity(float(np.dot(weights, crossovers))))


def awgn_bpsk_capacity(sigma2: float) -> float:
    """
    Capacity of the BPSK-input AWGN channel with noise variance sigma2.

    Evaluates 1 - integral f(y) H(eps(y)) dy, where f is the output density
    for equiprobable inputs and eps(y) = expit(2y / sigma2) is the posterior
    probability of the symbol -1 given y.

    Parameters:
    -----------
    sigma2: Noise variance (> 0)

    Returns:
    --------
    float: Capacity in bits per channel use

    Raises:
    -------
    ChannelParamsError: if sigma2 is not positive
    CapacityIntegrationError: if the quadrature does not converge
    """
    if not sigma2 > 0:
        raise ChannelParamsError(f"noise variance must be > 0, got {sigma2}")
    sigma = np.sqrt(sigma2)

    def integrand(y: float) -> float:
        density = 0.5 * (norm.pdf(y, loc=1.0, scale=sigma) + norm.pdf(y, loc=-1.0, scale=sigma))
        return float(density * binary_entropy(expit(2.0 * y / sigma2)))

    limit = 1.0 + _INTEGRATION_SPAN * sigma
    result = integrate.quad(
        integrand,
        -limit,
        limit,
        points=[-1.0, 1.0],
        epsabs=QUADRATURE_TOLERANCE,
        limit=200,
        full_output=1,
    )
    # quad appends a message only when it ran into trouble
    if len(result) > 3:
        raise CapacityIntegrationError(f"capacity integral for sigma2={sigma2} failed: {result[3]}")
    value, abserr = result[0], result[1]
    if abserr > 10 * QUADRATURE_TOLERANCE:
        raise CapacityIntegrationError(
            f"capacity integral for sigma2={sigma2} has error estimate {abserr:.3g}"
        )
    return float(np.clip(1.0 - value, 0.0, 1.0))


def state_capacity(sigma2: float) -> float:
    """Capacity of one state; a noiseless state carries one full bit."""
    return 1.0 if sigma2 == 0 else awgn_bpsk_capacity(sigma2)


def capacities(params: ChannelParams) -> CapacityBounds:
    """
    Genie and equivalent-stationary capacities of a piecewise-stationary AWGN channel.

    Returns:
    --------
    CapacityBounds: (sum_s p(s) C(sigma2(s)), C(sigma_bar2))
    """
    genie = sum(
        weight * state_capacity(variance)
        for weight, variance in zip(params.weights, params.variances)
        if weight > 0
    )
    stationary = state_capacity(params.sigma_bar2)
    logger.debug("capacities for %s: genie=%.6f stationary=%.6f", params, genie, stationary)
    return CapacityBounds(genie=float(genie), stationary=stationary)


def eb_n0_db(sigma_bar2: float, rate: Optional[float] = None) -> float:
    """
    Eb/N0 in dB as -10 log10(2 sigma_bar2).

    The rate is accepted for call-site symmetry but does not enter the
    formula.
    """
    if not sigma_bar2 > 0:
        raise ChannelParamsError(f"noise variance must be > 0, got {sigma_bar2}")
    # Adding 0.0 turns -0.0 (at sigma_bar2 = 0.5) into 0.0
    return float(-10.0 * np.log10(2.0 * sigma_bar2)) + 0.0

