import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modalqc import decoder
from modalqc.decoder import (
    Histogram,
    ModeFilter,
    binary_search_poll,
    detector_group,
    detector_groups,
    group_expectation,
    mode_filter,
    mode_probability,
    pad_to_power_of_two,
    projector_expectation,
    repeated_readout,
    sample_readout,
)
from modalqc.errors import (
    BadOccupation,
    BitOutOfRange,
    DimensionMismatch,
    EmptyBits,
    IndexOutOfRange,
    NotPowerOfTwo,
)
from modalqc.register import basis_state, new_state, random_state, uniform_state


def binomial_halfwidth(p, shots, sigmas=5):
    return sigmas * math.sqrt(p * (1 - p) / shots)


def test_mode_probability_examples():
    assert mode_probability(basis_state(4, 1), 1) == 1.0
    assert mode_probability(basis_state(4, 1), 0) == 0.0
    for mu in range(8):
        assert abs(mode_probability(uniform_state(8), mu) - 0.125) < 1e-15
    with pytest.raises(IndexOutOfRange):
        mode_probability(basis_state(4, 1), 4)


def test_mode_filter_keeps_one_component():
    s = new_state([1, 2j, 3, 4])
    out = mode_filter(s, 1)
    np.testing.assert_array_equal(out, [0, s.amplitudes[1], 0, 0])
    with pytest.raises(IndexOutOfRange):
        ModeFilter(4, 4)
    with pytest.raises(DimensionMismatch):
        ModeFilter(0, 3).apply(np.ones(4))


def test_projector_examples():
    assert projector_expectation(basis_state(2, 0), 0, 1) == 1.0
    assert projector_expectation(basis_state(2, 0), 0, 0) == 0.0
    # |0.8i|^2
    assert abs(projector_expectation(new_state([3, 4j]), 1, 1) - 0.64) < 1e-15
    with pytest.raises(BadOccupation):
        projector_expectation(basis_state(2, 0), 0, 2)


def test_projector_completeness_exact(rng):
    for _ in range(200):
        s = random_state(int(rng.integers(2, 40)), rng)
        mu = int(rng.integers(s.n_modes))
        assert projector_expectation(s, mu, 0) + projector_expectation(s, mu, 1) == 1.0


@pytest.mark.parametrize(
    "bit, members",
    [(0, (4, 5, 6, 7)), (1, (2, 3, 6, 7)), (2, (1, 3, 5, 7))],
)
def test_detector_groups_n8(bit, members):
    g = detector_group(8, bit)
    assert g.member_modes == members
    assert g.label == ["1xx", "x1x", "xx1"][bit]


def test_detector_group_errors():
    with pytest.raises(NotPowerOfTwo):
        detector_group(6, 0)
    with pytest.raises(BitOutOfRange):
        detector_group(8, 3)


@pytest.mark.parametrize("n", [2, 4, 16, 1024])
def test_detector_group_sizes(n):
    groups = detector_groups(n)
    assert len(groups) == int(math.log2(n))
    for g in groups:
        assert len(g.member_modes) == n // 2
        assert sorted(g.member_modes + g.complement()) == list(range(n))


def test_group_expectation_examples():
    for g in detector_groups(8):
        assert abs(group_expectation(uniform_state(8), g) - 0.5) < 1e-15
    s = basis_state(8, 5)
    assert group_expectation(s, detector_group(8, 0)) == 1.0
    assert group_expectation(s, detector_group(8, 1)) == 0.0
    with pytest.raises(DimensionMismatch):
        group_expectation(basis_state(4, 0), detector_group(8, 0))


@pytest.mark.parametrize("n", [2, 8, 64, 1024])
def test_bit_marginal_brute_force(rng, n):
    s = random_state(n, rng)
    width = n.bit_length() - 1
    for bit in range(width):
        # brute force over all modes using string formatting of labels
        expected = sum(
            mode_probability(s, mu) for mu in range(n) if format(mu, f"0{width}b")[bit] == "1"
        )
        g = detector_group(n, bit)
        assert abs(group_expectation(s, g) - expected) <= 1e-12
        comp = sum(mode_probability(s, mu) for mu in g.complement())
        assert abs(group_expectation(s, g) + comp - 1) <= 1e-12


def test_sample_readout_basis_states():
    for seed in range(20):
        r = sample_readout(basis_state(8, 6), seed)
        assert r.bits == (1, 1, 0) and r.decoded_mode == 6
        assert sample_readout(basis_state(8, 3), seed, shot_index=seed).bits == (0, 1, 1)


def test_sample_readout_deterministic(rng):
    s = random_state(16, rng)
    assert sample_readout(s, 11, 4) == sample_readout(s, 11, 4)
    with pytest.raises(NotPowerOfTwo):
        sample_readout(uniform_state(6), 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10), st.data())
def test_record_bits_decode_to_mode(width, data):
    n = 1 << width
    mode = data.draw(st.integers(0, n - 1))
    r = sample_readout(basis_state(max(n, 2), mode), data.draw(st.integers(0, 2**32)))
    assert int(r.bitstring, 2) == r.decoded_mode == mode


def test_sample_readout_uniform_frequencies():
    shots = 100_000
    counts = np.zeros(4)
    s = uniform_state(4)
    for i in range(shots // 10):
        counts[sample_readout(s, 5, i).decoded_mode] += 1
    freq = counts / counts.sum()
    assert np.all(np.abs(freq - 0.25) <= binomial_halfwidth(0.25, shots // 10))


def test_repeated_readout_basis_state():
    h = repeated_readout(basis_state(8, 3), 777, 1)
    assert h.counts[3] == 777 and h.total_shots == 777 and h.counts.sum() == 777


def test_repeated_readout_uniform_n4():
    shots = 40_000
    h = repeated_readout(uniform_state(4), shots, 0)
    assert np.max(np.abs(h.frequencies - 0.25)) <= 0.011
    assert h.counts.sum() == shots


@pytest.mark.parametrize("n", [2, 4, 8, 16])
def test_repeated_readout_converges(rng, n):
    s = random_state(n, rng)
    shots = 100_000
    h = repeated_readout(s, shots, 42)
    for mu in range(n):
        p = mode_probability(s, mu)
        assert abs(h.frequencies[mu] - p) <= binomial_halfwidth(p, shots) + 1e-12


def test_repeated_readout_deterministic_and_block_independent(rng):
    s = random_state(8, rng)
    a = repeated_readout(s, 20_000, 9)
    b = repeated_readout(s, 20_000, 9)
    np.testing.assert_array_equal(a.counts, b.counts)
    assert not np.array_equal(a.counts, repeated_readout(s, 20_000, 10).counts)
    # a prefix of whole blocks gives the same counts as the first blocks of a longer run
    block = decoder.SHOT_BLOCK
    short = repeated_readout(s, block, 9)
    first = decoder._draw_modes(s.probabilities, decoder._stream(9, 0), block)
    np.testing.assert_array_equal(short.counts, np.bincount(first, minlength=8))


def test_repeated_readout_rejects_zero_shots():
    with pytest.raises(ValueError):
        repeated_readout(uniform_state(4), 0, 0)


def test_histogram_csv():
    h = Histogram([1, 3], 4)
    assert h.to_csv() == "mode_index,count,frequency\n0,1,0.25\n1,3,0.75\n"
    with pytest.raises(ValueError):
        Histogram([1, 1], 3)


def test_binary_search_poll_examples():
    assert binary_search_poll((1, 1, 0)) == (6, 3)
    assert binary_search_poll((0,)) == (0, 1)
    with pytest.raises(EmptyBits):
        binary_search_poll(())


@pytest.mark.parametrize("width", range(1, 11))
def test_binary_search_poll_steps(width):
    for mode in {0, (1 << width) - 1, (1 << width) // 3}:
        bits = decoder.mode_bits(mode, width)
        assert binary_search_poll(bits) == (mode, width)


def test_pad_to_power_of_two():
    s = new_state([1, 1, 1, 1, 1, 1])
    padded, added = pad_to_power_of_two(s)
    assert added == 2 and padded.n_modes == 8
    np.testing.assert_array_equal(padded.probabilities[:6], s.probabilities)
    assert np.all(padded.probabilities[6:] == 0)
    same, zero = pad_to_power_of_two(uniform_state(4))
    assert zero == 0 and same.n_modes == 4


@pytest.mark.parametrize("n, bits", [(2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (1000, 10), (1024, 10), (1025, 11)])
def test_n_bits(n, bits):
    assert decoder.n_bits(n) == bits == math.ceil(math.log2(n))
