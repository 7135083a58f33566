"""
Tests for the LLR primitives and the SC and SCAN decoders.
"""

import itertools
from unittest.mock import MagicMock, patch

import numpy as np
import pytest

from src.coding.polar import encode, encode_block
from src.decoding.llr import (
    LLR_MAX,
    VAR_FLOOR,
    bias_probability,
    box_plus,
    channel_llrs,
    hard_decision,
)
from src.decoding.sc import SCDecoder, genie_bit_llrs, sc_decode
from src.decoding.scan import (
    LlrState,
    ScanDecoder,
    hard_decisions,
    init_llrs,
    scan_decode,
    scan_iteration,
    _box_plus_scalar,
    verify,
)
from src.errors import CodeSpecError
from src.simulation.config import SimConfig, parse_decoders
from src.simulation.sweep import trial_rng
from src.simulation.trial import run_trial

# Test data
SIGMA2 = 0.6
LR_PAIRS = 10_000


def box_plus_reference(a, b):
    """2 atanh(tanh(a/2) tanh(b/2)), fine away from saturation."""
    return 2.0 * np.arctanh(np.tanh(a / 2.0) * np.tanh(b / 2.0))


def noisy_block(spec, rng, sigma2=SIGMA2):
    """Random message, its codeword and a stationary AWGN observation."""
    info = rng.integers(0, 2, size=spec.K, dtype=np.uint8)
    x = encode(spec, info)
    y = (1.0 - 2.0 * x) + np.sqrt(sigma2) * rng.standard_normal(spec.N)
    return info, x, y


# LLR primitives

def test_box_plus_example():
    """ln3 [+] ln3 = ln(5/3)."""
    assert box_plus(np.log(3), np.log(3)) == pytest.approx(np.log(5 / 3), rel=1e-12)


def test_box_plus_matches_likelihood_ratio_domain(rng):
    """Log-domain box-plus equals ln((AB + 1) / (A + B)) for 10^4 pairs."""
    a = rng.uniform(-8, 8, LR_PAIRS)
    b = rng.uniform(-8, 8, LR_PAIRS)
    A, B = np.exp(a), np.exp(b)
    expected = np.log((A * B + 1.0) / (A + B))
    assert np.allclose(box_plus(a, b), expected, rtol=1e-9, atol=1e-12)


def test_box_plus_properties(rng):
    """Commutative, zero-absorbing, sign rule and magnitude bound."""
    a = rng.uniform(-20, 20, 500)
    b = rng.uniform(-20, 20, 500)
    result = box_plus(a, b)
    assert np.array_equal(result, box_plus(b, a))
    assert np.all(box_plus(a, 0.0) == 0.0)
    assert np.all(np.sign(result) == np.sign(a) * np.sign(b))
    assert np.all(np.abs(result) <= np.minimum(np.abs(a), np.abs(b)) + 1e-12)


def test_box_plus_with_certain_bit_is_identity():
    """Combining with a known 0 (LLR_MAX) leaves the other LLR unchanged."""
    a = np.array([-5.0, -0.3, 0.0, 2.5, 7.0])
    assert np.allclose(box_plus(a, LLR_MAX), a, atol=1e-12)
    assert np.allclose(box_plus(a, -LLR_MAX), -a, atol=1e-12)


def test_box_plus_matches_atanh_form(rng):
    """Stable form equals the tanh rule for moderate LLRs."""
    a = rng.uniform(-6, 6, 200)
    b = rng.uniform(-6, 6, 200)
    assert np.allclose(box_plus(a, b), box_plus_reference(a, b), rtol=1e-9, atol=1e-12)


def test_box_plus_keeps_sign_for_tiny_llrs(rng):
    """Near zero the result is a*b/2 with the product sign, never rounding noise."""
    a = rng.uniform(1e-10, 1e-8, LR_PAIRS) * rng.choice([-1.0, 1.0], LR_PAIRS)
    b = rng.uniform(1e-10, 1e-8, LR_PAIRS) * rng.choice([-1.0, 1.0], LR_PAIRS)
    result = box_plus(a, b)
    assert np.all(np.sign(result) == np.sign(a) * np.sign(b))
    assert np.allclose(result, a * b / 2.0, rtol=1e-6, atol=0.0)


@pytest.mark.parametrize("a, b", [
    (1e-9, -3e-9), (-2e-10, -7e-9), (0.0, 4.0), (1.5, -2.0), (4.999, 30.0), (6.0, -9.0), (-40.0, 40.0),
])
def test_scalar_kernel_matches_box_plus(a, b):
    """The float kernel used inside SCAN agrees with the array version."""
    assert _box_plus_scalar(a, b) == pytest.approx(float(box_plus(a, b)), rel=1e-12, abs=1e-300)


def test_channel_llrs_floor_and_clamp():
    """Tiny variances are floored and the result clamped."""
    llrs = channel_llrs([0.5, -1.0, 1.0], [1.0, 0.5, 0.0])
    assert llrs.tolist() == [1.0, -4.0, LLR_MAX]
    assert channel_llrs(1e-9, 0.0) == pytest.approx(2e-9 / VAR_FLOOR)


def test_hard_decision_and_bias():
    """Negative LLRs decide 1, zero decides 0, p = 1 / (1 + e^llr)."""
    assert hard_decision([-1.0, 0.0, 2.0]).tolist() == [1, 0, 0]
    assert bias_probability(0.0) == 0.5
    assert bias_probability(np.log(3)) == pytest.approx(0.25)


# SC

def test_sc_exhaustive_noiseless(identity_code):
    """Every message of an (8, 4) code is recovered from saturated LLRs."""
    spec = identity_code(3, [3, 5, 6, 7])
    for bits in itertools.product((0, 1), repeat=4):
        info = np.array(bits, dtype=np.uint8)
        x = encode(spec, info)
        u_hat = sc_decode(spec, LLR_MAX * (1.0 - 2.0 * x))
        assert np.array_equal(spec.extract_info(u_hat), info)
        assert not u_hat[spec.frozen_set].any()


def test_sc_noiseless_moderate_llrs(code_64, rng):
    """Noiseless observations decode correctly at finite LLRs."""
    for _ in range(10):
        info = rng.integers(0, 2, size=code_64.K, dtype=np.uint8)
        x = encode(code_64, info)
        u_hat = sc_decode(code_64, channel_llrs(1.0 - 2.0 * x, SIGMA2))
        assert np.array_equal(code_64.extract_info(u_hat), info)


def test_sc_all_frozen_code(identity_code):
    """With K = 0 the decoder returns the all-zero message for any input."""
    spec = identity_code(2, [])
    assert sc_decode(spec, np.array([3.0, -1.0, 0.5, -7.0])).tolist() == [0, 0, 0, 0]


def test_sc_rejects_wrong_length(code_16):
    """Channel LLRs must have length N."""
    with pytest.raises(CodeSpecError):
        sc_decode(code_16, np.zeros(code_16.N - 1))


def test_genie_llrs_of_clean_zero_word():
    """Clean all-zero transmissions give non-negative decision LLRs."""
    llrs = np.full((3, 8), 2.0)
    decisions = genie_bit_llrs(llrs)
    assert decisions.shape == (3, 8)
    assert np.all(decisions > 0)
    # u_N sees the sum of all channel LLRs
    assert decisions[0, -1] == pytest.approx(16.0)


def test_sc_decoder_outcome(code_16, rng):
    """SCDecoder runs once and never reports verification."""
    _, _, y = noisy_block(code_16, rng)
    outcome = SCDecoder(code_16).decode(y, np.full(code_16.N, SIGMA2))
    assert outcome.iterations_used == 1
    assert outcome.verified is False
    assert outcome.u_hat.shape == (code_16.N,)


# SCAN

def test_init_llrs_example(identity_code):
    """L[0] is the bit-reversed channel LLRs, R[n] the frozen priors."""
    spec = identity_code(2, [2, 3])
    state = init_llrs(np.array([0.5, -1.0, 0.0, 2.0]), np.array([1.0, 0.5, 2.0, 1e-9]), spec)
    assert state.L[0].tolist() == [1.0, 0.0, -4.0, LLR_MAX]
    assert state.R[2].tolist() == [LLR_MAX, LLR_MAX, 0.0, 0.0]
    assert not state.L[1:].any()
    assert not state.R[:2].any()


def test_first_iteration_pinned_messages(identity_code):
    """N = 4 without frozen bits: L[1] and L[2] after one iteration."""
    spec = identity_code(2, [0, 1, 2, 3])
    # sigma2 = 2 makes the channel LLRs equal to y
    state = init_llrs(np.array([1.0, -2.0, 3.0, -4.0]), np.full(4, 2.0), spec)
    assert state.L[0].tolist() == [1.0, 3.0, -2.0, -4.0]
    scan_iteration(state, spec)

    upper = box_plus_reference(1.0, -2.0)
    lower = box_plus_reference(3.0, -4.0)
    assert np.allclose(state.L[1], [upper, lower, -2.0, -4.0], rtol=1e-12)
    expected = [box_plus_reference(upper, lower), lower, box_plus_reference(-2.0, -4.0), -4.0]
    assert np.allclose(state.L[2], expected, rtol=1e-12)


def test_all_zero_llrs_are_a_fixed_point(identity_code):
    """Zero channel LLRs and no frozen bits keep every message at 0."""
    spec = identity_code(3, np.arange(8))
    state = init_llrs(np.zeros(8), np.ones(8), spec)
    for _ in range(3):
        scan_iteration(state, spec)
    assert not state.L.any()
    assert not state.R.any()


def test_hard_decisions_example(identity_code):
    """Frozen positions are forced to 0 and p follows the overall x-LLRs."""
    spec = identity_code(1, [1])
    state = LlrState(
        L=np.array([[0.0, -1.0], [-3.0, -2.0]]),
        R=np.array([[0.0, 0.0], [LLR_MAX, 0.0]]),
    )
    u_hat, x_hat, p = hard_decisions(state, spec)
    assert u_hat.tolist() == [0, 1]
    assert x_hat.tolist() == [0, 1]
    assert p[0] == 0.5
    assert p[1] == pytest.approx(1.0 / (1.0 + np.exp(-1.0)))


def test_verify(code_16, rng):
    """Consistent pairs pass; a flipped codeword bit or a frozen 1 fails."""
    u = np.zeros(code_16.N, dtype=np.uint8)
    u[code_16.info_set] = rng.integers(0, 2, size=code_16.K)
    x = encode_block(code_16, u)
    assert verify(u, x, code_16)

    flipped = x.copy()
    flipped[3] ^= 1
    assert not verify(u, flipped, code_16)

    frozen_one = u.copy()
    frozen_one[code_16.frozen_set[0]] = 1
    assert not verify(frozen_one, encode_block(code_16, frozen_one), code_16)


def test_verify_rejects_random_pairs(identity_code):
    """Independent random u_hat and x_hat of length 1024 never verify."""
    spec = identity_code(10, np.arange(512, 1024))
    rng = np.random.default_rng(5)
    for _ in range(100):
        u_hat = rng.integers(0, 2, size=spec.N, dtype=np.uint8)
        x_hat = rng.integers(0, 2, size=spec.N, dtype=np.uint8)
        assert not verify(u_hat, x_hat, spec)


def test_scan_noiseless_verifies_at_first_iteration(code_64, rng):
    """Noiseless input decodes and verifies after one iteration."""
    for _ in range(5):
        info = rng.integers(0, 2, size=code_64.K, dtype=np.uint8)
        x = encode(code_64, info)
        outcome = scan_decode(code_64, 1.0 - 2.0 * x, SIGMA2, max_iters=code_64.n + 1)
        assert outcome.verified
        assert outcome.iterations_used == 1
        assert np.array_equal(code_64.extract_info(outcome.u_hat), info)
        assert np.array_equal(outcome.x_hat, x)


def test_scan_frozen_positions_are_zero(code_64, rng):
    """Decoded messages never carry a 1 on a frozen position."""
    for _ in range(10):
        _, _, y = noisy_block(code_64, rng, sigma2=1.2)
        outcome = scan_decode(code_64, y, 1.2, max_iters=3)
        assert not outcome.u_hat[code_64.frozen_set].any()
        assert np.all((outcome.p >= 0) & (outcome.p <= 1))


def test_scan_exhausts_budget_without_verification(code_16, rng):
    """When nothing verifies the decoder stops after exactly max_iters."""
    _, _, y = noisy_block(code_16, rng)
    updater = MagicMock(side_effect=lambda p: np.full(code_16.N, SIGMA2))
    with patch("src.decoding.scan.verify", return_value=False):
        outcome = scan_decode(code_16, y, SIGMA2, max_iters=4, state_updater=updater)
    assert outcome.iterations_used == 4
    assert outcome.verified is False
    # No update after the final iteration
    assert updater.call_count == 3


def test_scan_budget_is_monotone(code_64, rng):
    """A decode that verifies within k iterations is unchanged by a larger budget."""
    checked = 0
    for _ in range(30):
        _, _, y = noisy_block(code_64, rng, sigma2=0.8)
        short = scan_decode(code_64, y, 0.8, max_iters=2)
        if not short.verified:
            continue
        longer = scan_decode(code_64, y, 0.8, max_iters=7)
        assert longer.verified
        assert longer.iterations_used == short.iterations_used
        assert np.array_equal(longer.u_hat, short.u_hat)
        checked += 1
    assert checked > 0


def test_constant_updater_matches_plain_scan(code_64, rng):
    """Refreshing L[0] with unchanged estimates keeps all other messages."""
    for _ in range(10):
        _, _, y = noisy_block(code_64, rng, sigma2=1.0)
        plain = scan_decode(code_64, y, 1.0, max_iters=5)
        refreshed = scan_decode(code_64, y, 1.0, max_iters=5,
                                state_updater=lambda p: np.full(code_64.N, 1.0))
        assert plain.iterations_used == refreshed.iterations_used
        assert np.array_equal(plain.u_hat, refreshed.u_hat)
        assert np.allclose(plain.p, refreshed.p)


def test_scan_rejects_empty_budget(code_16):
    """max_iters must be at least 1."""
    with pytest.raises(CodeSpecError):
        scan_decode(code_16, np.ones(code_16.N), SIGMA2, max_iters=0)


def test_scan_decoder_default_budget(code_16):
    """The default budget is n + 1 iterations."""
    assert ScanDecoder(code_16).max_iters == code_16.n + 1
    assert ScanDecoder(code_16, max_iters=2).max_iters == 2


def test_genie_variances_do_not_hurt(code_64):
    """On the permuted piecewise channel, SCAN with the true variances beats fixed-variance SCAN."""
    config = SimConfig(
        spec=code_64,
        lam=8.0,
        sigma_bar2s=(SIGMA2,),
        decoders=parse_decoders("scan,genie"),
        trials=300,
        seed=99,
    )
    frame_errors = {"scan": 0, "genie": 0}
    for trial_index in range(config.trials):
        for record in run_trial(config, code_64, SIGMA2, trial_rng(config.seed, 0, trial_index)):
            frame_errors[record.decoder] += int(record.frame_error)
    assert frame_errors["genie"] <= frame_errors["scan"]
