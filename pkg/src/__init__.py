"""
Polar SCAN simulator - joint decoding and channel-state estimation.

This package implements polar encoding, SC and SCAN decoding with
CRC-free verification, and the SWSCAN / W2SCAN decoders that re-estimate
the noise variance of a piecewise-stationary AWGN channel after every
SCAN iteration. A Monte Carlo harness compares the decoders on shared
noise and reports BER, FER and false-positive rates.
"""

from .channel.capacity import awgn_bpsk_capacity, bsc_capacity, capacities, eb_n0_db  # Capacity analytics
from .channel.piecewise import ChannelParams, ChannelRealization, sample_state_sequence, transmit  # Channel model
from .coding.construction import construct_code_monte_carlo, read_code_spec, write_code_spec  # Code construction
from .coding.polar import CodeSpec, encode  # Code description and encoder
from .decoding.sc import SCDecoder, sc_decode  # Successive cancellation
from .decoding.scan import ScanDecoder, scan_decode  # Soft cancellation
from .estimation.estimator import ChannelStateEstimator, EstimatorKind, estimator_update  # State estimation
from .simulation.config import DecoderSpec, SimConfig  # Sweep configuration
from .simulation.report import emit_report  # CSV report
from .simulation.sweep import Metrics, run_sweep  # Monte Carlo sweeps

__version__ = "0.1.0"  # Current version of the package

__all__ = [
    "awgn_bpsk_capacity",
    "bsc_capacity",
    "capacities",
    "eb_n0_db",
    "ChannelParams",
    "ChannelRealization",
    "sample_state_sequence",
    "transmit",
    "construct_code_monte_carlo",
    "read_code_spec",
    "write_code_spec",
    "CodeSpec",
    "encode",
    "SCDecoder",
    "sc_decode",
    "ScanDecoder",
    "scan_decode",
    "ChannelStateEstimator",
    "EstimatorKind",
    "estimator_update",
    "DecoderSpec",
    "SimConfig",
    "emit_report",
    "Metrics",
    "run_sweep",
]
