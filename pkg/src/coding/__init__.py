"""
Coding module for the polar simulator.

This package holds the static side of a polar code: the transform and
encoder, the transmission permutation, and the Monte Carlo construction
that chooses which virtual sub-channels carry information.
"""
