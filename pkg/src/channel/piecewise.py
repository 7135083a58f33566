"""
Piecewise-stationary AWGN channel with BPSK inputs.

The noise variance stays constant on pieces whose lengths are Poisson
distributed; the state of each piece is drawn independently from a
finite state space. Bits map to symbols as 0 -> +1 and 1 -> -1.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..errors import ChannelParamsError

logger = logging.getLogger(__name__)

# Relative tolerance for state probabilities summing to one
_PROBABILITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ChannelParams:
    """
    Parameters of the piecewise-stationary channel.

    Attributes:
    -----------
    lam: Mean piece length (Poisson parameter, > 0)
    variances: Noise variance of each state (all >= 0)
    probabilities: Selection probability of each state; None means uniform
    """
    lam: float
    variances: tuple
    probabilities: Optional[tuple] = None

    def __post_init__(self):
        if not self.lam > 0:
            raise ChannelParamsError(f"mean piece length must be > 0, got {self.lam}")

        variances = tuple(float(v) for v in self.variances)
        if not variances:
            raise ChannelParamsError("the state space needs at least one variance")
        if any(v < 0 or not np.isfinite(v) for v in variances):
            raise ChannelParamsError(f"state variances must be finite and >= 0, got {variances}")
        object.__setattr__(self, "variances", variances)

        if self.probabilities is not None:
            probabilities = tuple(float(p) for p in self.probabilities)
            if len(probabilities) != len(variances):
                raise ChannelParamsError(
                    f"{len(variances)} states but {len(probabilities)} probabilities"
                )
            if any(p < 0 for p in probabilities):
                raise ChannelParamsError("state probabilities must be non-negative")
            if abs(sum(probabilities) - 1.0) > _PROBABILITY_TOLERANCE:
                raise ChannelParamsError(f"state probabilities sum to {sum(probabilities)}, not 1")
            object.__setattr__(self, "probabilities", probabilities)

    @classmethod
    def from_multipliers(
        cls,
        lam: float,
        sigma_bar2: float,
        multipliers: Sequence[float] = (0.0, 1.0, 2.0),
        probabilities: Optional[Sequence[float]] = None,
    ) -> "ChannelParams":
        """
        State space given as multiples of a nominal variance.

        The multipliers are rescaled to a weighted mean of one, so the
        resulting sigma_bar2 always equals the nominal variance. The default
        multipliers (0, 1, 2) with uniform selection give the state space
        {0, sigma_bar2, 2 * sigma_bar2}. All-zero multipliers describe a
        noiseless channel and are kept as they are.
        """
        if not sigma_bar2 > 0:
            raise ChannelParamsError(f"nominal variance must be > 0, got {sigma_bar2}")
        probabilities = None if probabilities is None else tuple(probabilities)
        # Validates the multipliers and probabilities before any scaling
        unit = cls(lam=lam, variances=tuple(multipliers), probabilities=probabilities)
        mean = unit.sigma_bar2
        scale = sigma_bar2
        if mean > 0 and abs(mean - 1.0) > _PROBABILITY_TOLERANCE:
            logger.debug("multipliers %s have weighted mean %.6g; rescaling to 1", unit.variances, mean)
            scale = sigma_bar2 / mean
        variances = tuple(m * scale for m in unit.variances)
        return cls(lam=lam, variances=variances, probabilities=probabilities)

    @property
    def weights(self) -> np.ndarray:
        """State probabilities as an array (uniform when unspecified)."""
        if self.probabilities is None:
            return np.full(len(self.variances), 1.0 / len(self.variances))
        return np.asarray(self.probabilities)

    @property
    def sigma_bar2(self) -> float:
        """Probability-weighted mean noise variance."""
        return float(np.dot(self.weights, self.variances))

    @property
    def is_stationary(self) -> bool:
        """True when every state with positive probability has the same variance."""
        active = np.asarray(self.variances)[self.weights > 0]
        return bool(np.all(active == active[0]))


@dataclass
class ChannelRealization:
    """
    One draw of the per-symbol noise variances.

    Attributes:
    -----------
    variances: Length-N noise variances in transmission order
    piece_boundaries: Start index of every piece (the first is 0)
    piece_states: Index into ChannelParams.variances of every piece
    """
    variances: np.ndarray
    piece_boundaries: np.ndarray
    piece_states: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    @property
    def num_pieces(self) -> int:
        return int(self.piece_boundaries.size)

    @property
    def mean_piece_length(self) -> float:
        """Average length of the pieces that start inside the block."""
        return self.variances.size / max(self.num_pieces, 1)


def sample_state_sequence(params: ChannelParams, N: int, rng: np.random.Generator) -> ChannelRealization:
    """
    Draw the per-symbol variances of one block.

    Piece lengths are Poisson(lam) draws, redrawn when zero; every piece
    takes an independent state. Pieces are concatenated until they cover
    N symbols and the last one is truncated.

    Parameters:
    -----------
    params: Channel parameters
    N: Number of symbols (>= 1)
    rng: Random generator owned by the caller

    Returns:
    --------
    ChannelRealization: variances plus the piece layout
    """
    if N < 1:
        raise ChannelParamsError(f"block length must be >= 1, got {N}")

    weights = params.weights
    state_variances = np.asarray(params.variances)
    boundaries, states, lengths = [], [], []
    covered = 0
    while covered < N:
        length = int(rng.poisson(params.lam))
        if length == 0:
            continue
        boundaries.append(covered)
        states.append(int(rng.choice(len(weights), p=weights)))
        lengths.append(min(length, N - covered))
        covered += length

    piece_states = np.asarray(states, dtype=np.int64)
    variances = np.repeat(state_variances[piece_states], lengths)
    return ChannelRealization(
        variances=variances,
        piece_boundaries=np.asarray(boundaries, dtype=np.int64),
        piece_states=piece_states,
    )


def transmit(x: np.ndarray, realization: ChannelRealization, rng: np.random.Generator) -> np.ndarray:
    """
    BPSK transmission: y_i = (1 - 2 x_i) + z_i with z_i ~ N(0, variance_i).

    Symbols on noiseless pieces come out as exactly +1 or -1.
    """
    x = np.asarray(x)
    if x.shape != realization.variances.shape:
        raise ChannelParamsError(
            f"codeword shape {x.shape} does not match realization {realization.variances.shape}"
        )
    noise = np.sqrt(realization.variances) * rng.standard_normal(x.shape)
    return (1.0 - 2.0 * x.astype(float)) + noise
