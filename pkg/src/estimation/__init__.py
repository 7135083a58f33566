"""
Estimation module for the polar simulator.

This package re-estimates the per-symbol noise variances between SCAN
iterations: squared residuals from the decoder's bias probabilities,
an equal-weight sliding window with an MSE-optimal half size, and the
weighted window whose taps come from a constrained quadratic program.
"""
