"""
Common interface for polar decoders.

This module defines the abstract base class every decoder in the
simulator inherits from, and the DecodeOutcome record they all return.
The simulation harness only talks to this interface, so SC, SCAN and the
state-estimating SCAN variants are interchangeable behind it.
"""

from abc import ABC, abstractmethod  # For abstract class definition
from dataclasses import dataclass  # For the outcome record
from typing import Callable, Optional  # For type hints

import numpy as np

from ..coding.polar import CodeSpec

# Per-iteration callback: bias probabilities (codeword order) -> new variance estimates
StateUpdater = Callable[[np.ndarray], np.ndarray]


@dataclass
class DecodeOutcome:
    """
    Result of decoding one block.

    Attributes:
    -----------
    u_hat: Full-length message decisions (frozen positions are 0)
    x_hat: Codeword decisions in codeword order
    p: Bias probabilities Pr(x_i = 1) in codeword order
    iterations_used: Number of iterations run (1 for SC)
    verified: True when u_hat re-encodes exactly to x_hat
    sigma2_hat: Variance estimates in force when decoding stopped
    """
    u_hat: np.ndarray
    x_hat: np.ndarray
    p: np.ndarray
    iterations_used: int
    verified: bool
    sigma2_hat: Optional[np.ndarray] = None


class BaseDecoder(ABC):
    """
    Base class for all decoders.

    A decoder is bound to one code. Each call to decode() is independent:
    message state is created per call and never shared, so one decoder
    instance can serve many trials.
    """

    # Short name used in reports (e.g. "sc", "scan")
    kind: str = "base"

    def __init__(self, spec: CodeSpec, max_iters: Optional[int] = None):
        """
        Parameters:
        -----------
        spec: The code to decode
        max_iters: Iteration budget for iterative decoders; defaults to n + 1
        """
        self.spec = spec
        self.max_iters = max_iters if max_iters is not None else spec.n + 1

    @abstractmethod
    def decode(
        self,
        y: np.ndarray,
        sigma2: np.ndarray,
        state_updater: Optional[StateUpdater] = None,
    ) -> DecodeOutcome:
        """
        Decode one received block.

        Parameters:
        -----------
        y: Received samples in codeword (pre-permutation) order
        sigma2: Initial per-symbol noise variance estimates, codeword order
        state_updater: Optional callback refreshing the variance estimates
            after each iteration; decoders without iterations ignore it

        Returns:
        --------
        DecodeOutcome: decisions, bias probabilities and stopping status
        """
        pass
