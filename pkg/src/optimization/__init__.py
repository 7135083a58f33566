"""
Optimization module for the polar simulator.

This package holds the dedicated active-set solver for the tap-weight
quadratic program of the weighted-window estimator.
"""
