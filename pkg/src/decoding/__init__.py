"""
Decoding module for the polar simulator.

This package contains the LLR primitives and the decoders built on them:
successive cancellation, and the iterative soft cancellation decoder
that the state-estimating variants extend through a per-iteration
callback.
"""
