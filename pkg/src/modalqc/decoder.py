"""Particle-counting readout of the modal register.

Detector bits are labelled most-significant first: for N=8, bit 0 is the
``1xx`` counter, bit 1 is ``x1x`` and bit 2 is ``xx1``. All grouped counters
are diagonal in the mode basis and commute, so one shot is simulated by
drawing the occupied mode and reading every bit off its label.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BadOccupation,
    BitOutOfRange,
    DimensionMismatch,
    EmptyBits,
    IndexOutOfRange,
    NotPowerOfTwo,
)
from .register import SingleParticleState

# Shots are drawn in fixed-size blocks; block b uses the stream seeded by
# (seed, b), so a histogram does not depend on how blocks are scheduled.
SHOT_BLOCK = 8192


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def n_bits(n_modes: int) -> int:
    """Number of detector bits, ``ceil(log2 N)``."""
    if n_modes < 1:
        raise ValueError(f"n_modes must be positive, got {n_modes}")
    return (n_modes - 1).bit_length()


def _require_power_of_two(n_modes: int) -> int:
    if n_modes < 2 or not is_power_of_two(n_modes):
        raise NotPowerOfTwo(f"binary readout needs N a power of 2, got {n_modes}")
    return n_modes.bit_length() - 1


def pad_to_power_of_two(state: SingleParticleState) -> tuple[SingleParticleState, int]:
    """Zero-pad the register to the next power of two; returns ``(state, n_added)``."""
    n = state.n_modes
    target = 1 << n_bits(n)
    if target == n:
        return state, 0
    amps = np.zeros(target, dtype=np.complex128)
    amps[:n] = state.amplitudes
    return SingleParticleState(amps), target - n


def _check_mode(state: SingleParticleState, mode_index: int):
    if not 0 <= mode_index < state.n_modes:
        raise IndexOutOfRange(f"mode {mode_index} outside 0..{state.n_modes - 1}")


@dataclass(frozen=True)
class ModeFilter:
    """Linear filter passing only detector mode ``target_mode``.

    This is the mode-projection special case of a general spatio-temporal
    filter kernel; arbitrary kernels are not modelled.
    """

    target_mode: int
    n_modes: int

    def __post_init__(self):
        if not 0 <= self.target_mode < self.n_modes:
            raise IndexOutOfRange(f"mode {self.target_mode} outside 0..{self.n_modes - 1}")

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if amps.shape != (self.n_modes,):
            raise DimensionMismatch(f"filter on {self.n_modes} modes, got {amps.shape}")
        out = np.zeros_like(amps)
        out[self.target_mode] = amps[self.target_mode]
        return out


def mode_filter(state: SingleParticleState, mode_index: int) -> np.ndarray:
    """Filtered register amplitudes for detector mode ``mode_index``."""
    return ModeFilter(mode_index, state.n_modes).apply(state.amplitudes)


def mode_probability(state: SingleParticleState, mode_index: int) -> float:
    """Expected particle count in one mode, ``|psi_mu|^2``."""
    _check_mode(state, mode_index)
    filtered = mode_filter(state, mode_index)
    return float(np.vdot(filtered, filtered).real)


def projector_expectation(state: SingleParticleState, mode_index: int, n: int) -> float:
    """Probability of counting ``n`` particles (0 or 1) in ``mode_index``."""
    if n not in (0, 1):
        raise BadOccupation(f"a single particle gives occupation 0 or 1, not {n}")
    p = mode_probability(state, mode_index)
    return 1.0 - p if n == 0 else p


@dataclass(frozen=True)
class DetectorGroup:
    bit_index: int
    member_modes: tuple[int, ...]
    n_modes: int

    @property
    def label(self) -> str:
        """Pattern such as ``x1x``: the counter's shared bit with wildcards elsewhere."""
        width = self.n_modes.bit_length() - 1
        return "".join("1" if i == self.bit_index else "x" for i in range(width))

    def complement(self) -> tuple[int, ...]:
        members = set(self.member_modes)
        return tuple(m for m in range(self.n_modes) if m not in members)


def mode_bit(mode_index: int, bit_index: int, width: int) -> int:
    return (mode_index >> (width - 1 - bit_index)) & 1


def mode_bits(mode_index: int, width: int) -> tuple[int, ...]:
    return tuple(mode_bit(mode_index, b, width) for b in range(width))


def detector_group(n_modes: int, bit_index: int) -> DetectorGroup:
    width = _require_power_of_two(n_modes)
    if not 0 <= bit_index < width:
        raise BitOutOfRange(f"bit {bit_index} outside 0..{width - 1} for N={n_modes}")
    members = tuple(m for m in range(n_modes) if mode_bit(m, bit_index, width))
    return DetectorGroup(bit_index, members, n_modes)


def detector_groups(n_modes: int) -> list[DetectorGroup]:
    width = _require_power_of_two(n_modes)
    return [detector_group(n_modes, b) for b in range(width)]


def group_expectation(state: SingleParticleState, group: DetectorGroup) -> float:
    if group.n_modes != state.n_modes:
        raise DimensionMismatch(f"group for {group.n_modes} modes, state has {state.n_modes}")
    return float(np.sum(state.probabilities[list(group.member_modes)]))


@dataclass(frozen=True)
class ReadoutRecord:
    bits: tuple[int, ...]
    decoded_mode: int
    shot_index: int = 0

    @property
    def bitstring(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class Histogram:
    counts: np.ndarray
    total_shots: int

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        if int(counts.sum()) != self.total_shots:
            raise ValueError(f"counts sum to {counts.sum()}, expected {self.total_shots}")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def n_modes(self) -> int:
        return self.counts.size

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.total_shots

    def __add__(self, other: Histogram) -> Histogram:
        if other.n_modes != self.n_modes:
            raise DimensionMismatch(f"{self.n_modes} vs {other.n_modes} modes")
        return Histogram(self.counts + other.counts, self.total_shots + other.total_shots)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("mode_index,count,frequency\n")
        for mode, (count, freq) in enumerate(zip(self.counts, self.frequencies)):
            buf.write(f"{mode},{int(count)},{float(freq)!r}\n")
        return buf.getvalue()


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


def _draw_modes(probs: np.ndarray, rng: np.random.Generator, size: int) -> np.ndarray:
    # inverse-CDF sampling; clip guards against the last CDF value falling below 1
    cdf = np.cumsum(probs)
    idx = np.searchsorted(cdf, rng.random(size) * cdf[-1], side="right")
    return np.minimum(idx, probs.size - 1)


def sample_readout(state: SingleParticleState, rng_seed: int, shot_index: int = 0) -> ReadoutRecord:
    """One cascaded readout shot. Deterministic in ``(rng_seed, shot_index)``."""
    width = _require_power_of_two(state.n_modes)
    mode = int(_draw_modes(state.probabilities, _stream(rng_seed, shot_index), 1)[0])
    bits = mode_bits(mode, width)
    decoded, _ = binary_search_poll(bits)
    return ReadoutRecord(bits, decoded, shot_index)


def repeated_readout(state: SingleParticleState, n_shots: int, rng_seed: int) -> Histogram:
    """Histogram of decoded modes over ``n_shots`` independent runs."""
    if n_shots < 1:
        raise ValueError(f"n_shots must be >= 1, got {n_shots}")
    _require_power_of_two(state.n_modes)
    probs = state.probabilities
    hist = Histogram(np.zeros(state.n_modes, dtype=np.int64), 0)
    for block, start in enumerate(range(0, n_shots, SHOT_BLOCK)):
        size = min(SHOT_BLOCK, n_shots - start)
        modes = _draw_modes(probs, _stream(rng_seed, block), size)
        hist = hist + Histogram(np.bincount(modes, minlength=state.n_modes), size)
    return hist


def binary_search_poll(bits: Sequence[int]) -> tuple[int, int]:
    """Locate the fired mode by halving the candidate range once per detector bit.

    Returns ``(mode_index, steps)``; ``steps`` always equals ``len(bits)``.
    """
    if len(bits) == 0:
        raise EmptyBits("no detector bits to poll")
    lo, hi = 0, 1 << len(bits)
    steps = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"detector bits must be 0 or 1, got {b!r}")
        mid = (lo + hi) // 2
        if b:
            lo = mid
        else:
            hi = mid
        steps += 1
    return lo, steps
