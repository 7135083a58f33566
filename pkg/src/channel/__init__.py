"""
Channel module for the polar simulator.

This package simulates the piecewise-stationary AWGN channel with BPSK
inputs and provides the capacity analytics used to place simulated
operating points against their theoretical limits.
"""
