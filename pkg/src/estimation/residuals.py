"""
Squared residuals of the received samples.

Given the received sample y_i and the decoder's bias probability p_i =
Pr(x_i = 1), the squared noise sample is estimated by averaging over the
two possible symbols:

    z2_i = p_i * (y_i + 1)^2 + (1 - p_i) * (y_i - 1)^2

The series is padded symmetrically (z2_{1-j} = z2_{1+j} and
z2_{N+j} = z2_{N-j}) so that windows centred on the first and last
symbols never leave the array.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import CodeSpecError


@dataclass
class ResidualSeries:
    """
    Symmetrically padded squared residuals.

    Attributes:
    -----------
    z2: Padded series of length N + 2 * pad
    pad: Number of mirrored samples on each side
    """
    z2: np.ndarray
    pad: int

    @classmethod
    def from_core(cls, z2: np.ndarray, pad: Optional[int] = None) -> "ResidualSeries":
        """
        Pad an unpadded series.

        Parameters:
        -----------
        z2: The N squared residuals (N >= 2)
        pad: Padding width; defaults to floor(N / 2), the largest half window
        """
        core = np.asarray(z2, dtype=float)
        if core.ndim != 1 or core.size < 2:
            raise CodeSpecError(f"residual series needs at least 2 samples, got shape {core.shape}")
        if pad is None:
            pad = core.size // 2
        # numpy's "reflect" mirrors without repeating the edge sample
        return cls(z2=np.pad(core, pad, mode="reflect"), pad=pad)

    @property
    def N(self) -> int:
        return self.z2.size - 2 * self.pad

    @property
    def core(self) -> np.ndarray:
        """The unpadded residuals z2_1..z2_N."""
        return self.z2[self.pad:self.pad + self.N]

    @property
    def max_half_window(self) -> int:
        return min(self.pad, self.N // 2)

    def shifted(self, offset: int) -> np.ndarray:
        """View holding z2_{i + offset} for i = 1..N (|offset| <= pad)."""
        if abs(offset) > self.pad:
            raise CodeSpecError(f"offset {offset} exceeds the padding width {self.pad}")
        start = self.pad + offset
        return self.z2[start:start + self.N]

    def check_half_window(self, m: int) -> None:
        if not 1 <= m <= self.max_half_window:
            raise CodeSpecError(f"half window must lie in [1, {self.max_half_window}], got {m}")


def squared_residuals(y: np.ndarray, p: np.ndarray, pad: Optional[int] = None) -> ResidualSeries:
    """
    Squared residuals of one block, padded for windowing.

    Parameters:
    -----------
    y: Received samples
    p: Bias probabilities Pr(x_i = 1), aligned with y
    pad: Padding width (default floor(N / 2))

    Returns:
    --------
    ResidualSeries: padded, non-negative residuals
    """
    y = np.asarray(y, dtype=float)
    p = np.asarray(p, dtype=float)
    if y.shape != p.shape:
        raise CodeSpecError(f"samples {y.shape} and bias probabilities {p.shape} differ in shape")
    if p.size and (p.min() < 0.0 or p.max() > 1.0):
        raise CodeSpecError("bias probabilities must lie in [0, 1]")

    z2 = p * (y + 1.0) ** 2 + (1.0 - p) * (y - 1.0) ** 2
    return ResidualSeries.from_core(z2, pad)
