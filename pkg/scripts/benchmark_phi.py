#!/usr/bin/env python3
"""
Timing spot-check for the phi matrix of the weighted window.

Building phi costs O(N m^2), so quadrupling m at fixed N should multiply
the time by roughly 16. The check passes when the ratio lies in [8, 32].
"""

import sys
import time
from pathlib import Path

import numpy as np

# Add the project root to the Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.estimation.residuals import ResidualSeries  # noqa: E402
from src.estimation.weighted_window import build_phi  # noqa: E402

N = 1 << 12
SMALL_M = 32
LARGE_M = 128
REPEATS = 20


def best_time(series: ResidualSeries, m: int) -> float:
    """Fastest of REPEATS runs, in seconds."""
    times = []
    for _ in range(REPEATS):
        start = time.perf_counter()
        build_phi(series, m)
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    series = ResidualSeries.from_core(np.random.default_rng(0).standard_normal(N) ** 2)
    small = best_time(series, SMALL_M)
    large = best_time(series, LARGE_M)
    ratio = large / small

    print(f"build_phi N={N}: m={SMALL_M} {1e3 * small:.2f} ms, m={LARGE_M} {1e3 * large:.2f} ms")
    print(f"ratio {ratio:.1f} (expected about {(LARGE_M / SMALL_M) ** 2:.0f})")
    if 8 <= ratio <= 32:
        print("✓ Quadratic scaling in m confirmed")
    else:
        print("✗ Scaling outside [8, 32]")
        sys.exit(1)


if __name__ == "__main__":
    main()
