"""
Tests for Monte Carlo code construction and the code-spec file format.
"""

import numpy as np
import pytest

from src.coding.construction import (
    ReliabilityOrder,
    construct_code_monte_carlo,
    read_code_spec,
    write_code_spec,
)
from src.coding.polar import random_permutation
from src.errors import CodeSpecError

# Test data
NOISELESS_SIGMA2 = 1e-6


def test_noiseless_construction_keeps_natural_order():
    """Without errors every count is 0 and ties keep the lower index first."""
    spec, reliability = construct_code_monte_carlo(n=3, K=4, sigma_bar2=NOISELESS_SIGMA2, trials=50, seed=3)
    assert not reliability.error_counts.any()
    assert reliability.order.tolist() == list(range(8))
    assert spec.info_set.tolist() == [0, 1, 2, 3]


def test_first_bit_is_frozen_at_half_rate():
    """u_1 is the least reliable sub-channel at N = 1024, sigma2 = 0.5."""
    trials = 2000
    spec, reliability = construct_code_monte_carlo(n=10, K=512, sigma_bar2=0.5, trials=trials, seed=11)
    assert 0 in spec.frozen_set
    # The first bit is close to a coin flip; allow sampling noise against the maximum
    assert reliability.error_counts[0] >= reliability.error_counts.max() - 4 * np.sqrt(trials)
    assert reliability.error_counts[0] > 0.3 * trials
    # A sub-channel decided from correct LLRs errs at most half the time
    assert reliability.error_counts.max() <= 0.5 * trials + 4 * np.sqrt(0.25 * trials)


def test_last_bit_is_most_reliable():
    """u_N sees the sum of all channel LLRs and is an information bit."""
    spec, reliability = construct_code_monte_carlo(n=6, K=32, sigma_bar2=0.5, trials=2000, seed=4)
    assert reliability.error_counts[-1] == 0
    assert 63 in spec.info_set


def test_construction_is_deterministic():
    """The same seed yields the same code and counts."""
    first, order_a = construct_code_monte_carlo(n=5, K=16, sigma_bar2=0.6, trials=1500, seed=9)
    second, order_b = construct_code_monte_carlo(n=5, K=16, sigma_bar2=0.6, trials=1500, seed=9)
    assert np.array_equal(first.info_set, second.info_set)
    assert np.array_equal(first.tx_perm, second.tx_perm)
    assert np.array_equal(order_a.error_counts, order_b.error_counts)
    assert first.fingerprint() == second.fingerprint()


def test_perm_seed_controls_permutation_only():
    """A separate permutation seed leaves the information set unchanged."""
    base, _ = construct_code_monte_carlo(n=4, K=8, sigma_bar2=0.5, trials=500, seed=1)
    other, _ = construct_code_monte_carlo(n=4, K=8, sigma_bar2=0.5, trials=500, seed=1, perm_seed=77)
    assert np.array_equal(base.info_set, other.info_set)
    assert np.array_equal(other.tx_perm, random_permutation(16, 77))
    assert other.perm_seed == 77


@pytest.mark.parametrize("kwargs", [
    {"trials": 0},
    {"sigma_bar2": 0.0},
    {"n": 0},
])
def test_construction_rejects_bad_arguments(kwargs):
    """Zero trials, non-positive variance and n < 1 are refused."""
    arguments = {"n": 3, "K": 4, "sigma_bar2": 0.5, "trials": 10, "seed": 0}
    arguments.update(kwargs)
    with pytest.raises(CodeSpecError):
        construct_code_monte_carlo(**arguments)


def test_reliability_order_from_counts():
    """Sorting is stable and rates divide by the trial count."""
    reliability = ReliabilityOrder.from_counts([5, 0, 5, 1], trials=10)
    assert reliability.order.tolist() == [1, 3, 0, 2]
    assert np.allclose(reliability.bit_error_rates, [0.5, 0.0, 0.5, 0.1])


def test_code_spec_file_roundtrip(tmp_path, code_16):
    """Writing and reading a code spec preserves every field."""
    _, reliability = construct_code_monte_carlo(n=4, K=8, sigma_bar2=0.5, trials=2000, seed=1)
    path = tmp_path / "code.txt"
    write_code_spec(path, code_16, reliability.order)

    lines = path.read_text().splitlines()
    assert lines[0] == f"4 8 {code_16.perm_seed}"
    assert sorted(int(t) for t in lines[1].split()) == list(range(1, 17))

    restored, order = read_code_spec(path)
    assert np.array_equal(order, reliability.order)
    assert np.array_equal(restored.info_set, code_16.info_set)
    assert np.array_equal(restored.tx_perm, code_16.tx_perm)
    assert restored.fingerprint() == code_16.fingerprint()


def test_write_rejects_inconsistent_order(tmp_path, identity_code):
    """The K best entries of the order must be the information set."""
    spec = identity_code(2, [0, 1])
    with pytest.raises(CodeSpecError):
        write_code_spec(tmp_path / "code.txt", spec, np.array([3, 2, 1, 0]))


@pytest.mark.parametrize("content", [
    "3 4 0\n1 2 3 4 5 6 7 8\n",
    "3 4 0\n1 2 3 4 5 6 7 x\n1 2 3 4 5 6 7 8\n",
    "3 4 0\n1 2 3 4 5 6 7 7\n1 2 3 4 5 6 7 8\n",
    "3 4 0\n1 2 3 4 5 6 7 8\n1 2 3 4 5 6 8 8\n",
])
def test_read_rejects_malformed_files(tmp_path, content):
    """Missing lines, bad tokens and non-permutations raise CodeSpecError."""
    path = tmp_path / "bad.txt"
    path.write_text(content)
    with pytest.raises(CodeSpecError):
        read_code_spec(path)


def test_read_missing_file(tmp_path):
    """An unreadable file raises CodeSpecError."""
    with pytest.raises(CodeSpecError):
        read_code_spec(tmp_path / "missing.txt")
