"""
Simulation configuration.

A SimConfig fixes everything a sweep needs: the code, the channel
family, the noise points, the decoders to compare and the seed all
randomness derives from.
"""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from ..channel.piecewise import ChannelParams
from ..coding.polar import CodeSpec
from ..errors import ChannelParamsError, SimConfigError


class DecoderKind(str, Enum):
    """Decoders the harness can dispatch."""
    SC = "sc"
    SCAN = "scan"
    SWSCAN = "swscan"
    W2SCAN = "w2scan"
    GENIE = "genie"  # SCAN fed the true per-symbol variances


# Kinds whose verification rule can produce false positives
VERIFYING_KINDS = frozenset({DecoderKind.SCAN, DecoderKind.SWSCAN, DecoderKind.W2SCAN, DecoderKind.GENIE})


@dataclass(frozen=True)
class DecoderSpec:
    """
    One decoder series of a sweep.

    Attributes:
    -----------
    kind: Decoder kind
    alpha: Window multiplier (meaningful for W2SCAN only)
    """
    kind: DecoderKind
    alpha: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", DecoderKind(self.kind))
        if not self.alpha > 0:
            raise SimConfigError(f"alpha must be > 0, got {self.alpha}")

    @property
    def label(self) -> str:
        """Unique name of the series, e.g. "scan" or "w2scan-2"."""
        if self.kind is DecoderKind.W2SCAN:
            return f"w2scan-{self.alpha:g}"
        return self.kind.value

    @property
    def verifies(self) -> bool:
        return self.kind in VERIFYING_KINDS

    @classmethod
    def parse(cls, token: str, default_alpha: float = 1.0) -> "DecoderSpec":
        """
        Parse a decoder token.

        Accepted forms: sc, scan, swscan, genie, w2scan (uses default_alpha)
        and w2scan-<alpha>, e.g. w2scan-2.
        """
        text = token.strip().lower().replace("w²scan", "w2scan")
        if text.startswith("w2scan-"):
            try:
                alpha = float(text[len("w2scan-"):])
            except ValueError:
                raise SimConfigError(f"bad window multiplier in decoder token {token!r}")
            return cls(DecoderKind.W2SCAN, alpha)
        try:
            kind = DecoderKind(text)
        except ValueError:
            choices = ", ".join(k.value for k in DecoderKind)
            raise SimConfigError(f"unknown decoder {token!r} (choose from {choices}, w2scan-<alpha>)")
        return cls(kind, default_alpha if kind is DecoderKind.W2SCAN else 1.0)


def parse_decoders(text: str, default_alpha: float = 1.0) -> Tuple[DecoderSpec, ...]:
    """Parse a comma-separated decoder list, dropping repeated series."""
    decoders: List[DecoderSpec] = []
    for token in text.split(","):
        if not token.strip():
            continue
        decoder = DecoderSpec.parse(token, default_alpha)
        if decoder not in decoders:
            decoders.append(decoder)
    if not decoders:
        raise SimConfigError("at least one decoder is required")
    return tuple(decoders)


def parse_floats(text: str, name: str) -> Tuple[float, ...]:
    """Parse a comma-separated list of numbers for the option `name`."""
    try:
        values = tuple(float(token) for token in text.split(",") if token.strip())
    except ValueError:
        raise SimConfigError(f"{name} must be a comma-separated list of numbers, got {text!r}")
    if not values:
        raise SimConfigError(f"{name} needs at least one value")
    return values


@dataclass
class SimConfig:
    """
    Everything one sweep needs.

    Attributes:
    -----------
    spec: The polar code
    lam: Mean piece length of the channel
    sigma_bar2s: Nominal noise variances to sweep (each > 0)
    decoders: Decoder series to compare on shared noise
    trials: Trials per noise point (>= 1)
    multipliers: State variances as multiples of the nominal variance
    probabilities: State probabilities (uniform when None)
    max_iters: SCAN iteration budget; defaults to n + 1
    seed: Master seed
    workers: Worker processes (1 runs in-process)
    progress: Show a progress bar
    output: CSV destination, if any
    """
    spec: CodeSpec
    lam: float
    sigma_bar2s: Tuple[float, ...]
    decoders: Tuple[DecoderSpec, ...]
    trials: int
    multipliers: Tuple[float, ...] = (0.0, 1.0, 2.0)
    probabilities: Optional[Tuple[float, ...]] = None
    max_iters: Optional[int] = None
    seed: int = 0
    workers: int = 1
    progress: bool = False
    output: Optional[Path] = None

    def __post_init__(self):
        self.sigma_bar2s = tuple(float(s) for s in self.sigma_bar2s)
        self.decoders = tuple(self.decoders)
        if self.trials < 1:
            raise SimConfigError(f"trials must be >= 1, got {self.trials}")
        if not self.sigma_bar2s or any(not s > 0 for s in self.sigma_bar2s):
            raise SimConfigError(f"every sigma_bar2 must be > 0, got {self.sigma_bar2s}")
        if len(set(self.sigma_bar2s)) != len(self.sigma_bar2s):
            raise SimConfigError(f"sigma_bar2 values must be distinct, got {self.sigma_bar2s}")
        if not self.decoders:
            raise SimConfigError("at least one decoder is required")
        check_unique_labels(self.decoders)
        if self.max_iters is None:
            self.max_iters = self.spec.n + 1
        if self.max_iters < 1:
            raise SimConfigError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.workers < 1:
            raise SimConfigError(f"workers must be >= 1, got {self.workers}")
        try:
            # Validates lambda, multipliers and probabilities once up front
            self.channel_params(self.sigma_bar2s[0])
        except ChannelParamsError as e:
            raise SimConfigError(str(e))

    def channel_params(self, sigma_bar2: float) -> ChannelParams:
        return ChannelParams.from_multipliers(self.lam, sigma_bar2, self.multipliers, self.probabilities)

    @property
    def decoder_labels(self) -> List[str]:
        return [decoder.label for decoder in self.decoders]


def check_unique_labels(decoders: Sequence[DecoderSpec]) -> None:
    labels = [decoder.label for decoder in decoders]
    if len(set(labels)) != len(labels):
        raise SimConfigError(f"decoder series must be distinct, got {labels}")
