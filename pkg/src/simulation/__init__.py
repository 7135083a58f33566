"""
Simulation module for the polar simulator.

This package runs the Monte Carlo experiments: configuration and decoder
dispatch, single paired trials, seeded sweeps over noise points, and the
CSV report of BER, FER and false-positive rates.
"""
