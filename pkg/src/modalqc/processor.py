"""Unitary evolution of the register and the Grover search primitives."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, NotUnitary, TooSmall
from .register import SingleParticleState, basis_state

UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class UnitaryOp:
    """Dense N x N unitary. Unitarity is checked once, here."""

    matrix: np.ndarray
    n_modes: int = field(init=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"unitary must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NotUnitary("matrix contains NaN or Inf")
        dev = unitarity_deviation(m)
        if dev > UNITARY_TOL:
            raise NotUnitary(f"max |U^H U - I| = {dev:.3g} exceeds {UNITARY_TOL}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "n_modes", m.shape[0])

    def __matmul__(self, other: UnitaryOp) -> UnitaryOp:
        if not isinstance(other, UnitaryOp):
            return NotImplemented
        if other.n_modes != self.n_modes:
            raise DimensionMismatch(f"{self.n_modes} vs {other.n_modes} modes")
        return UnitaryOp(self.matrix @ other.matrix)

    @property
    def dagger(self) -> UnitaryOp:
        return UnitaryOp(self.matrix.conj().T)


def unitarity_deviation(matrix: np.ndarray) -> float:
    m = np.asarray(matrix)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def identity(n_modes: int) -> UnitaryOp:
    return UnitaryOp(np.eye(n_modes, dtype=np.complex128))


def random_unitary(n_modes: int, rng: np.random.Generator) -> UnitaryOp:
    """Haar-random unitary: QR of a complex Gaussian matrix with phases fixed."""
    z = (rng.standard_normal((n_modes, n_modes)) + 1j * rng.standard_normal((n_modes, n_modes)))
    q, r = np.linalg.qr(z / math.sqrt(2.0))
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return UnitaryOp(q)


def apply_unitary(state: SingleParticleState, u: UnitaryOp) -> SingleParticleState:
    if u.n_modes != state.n_modes:
        raise DimensionMismatch(f"unitary on {u.n_modes} modes, state has {state.n_modes}")
    return SingleParticleState(u.matrix @ state.amplitudes)


def oracle_phase_flip(n_modes: int, marked_index: int) -> UnitaryOp:
    """Diagonal unitary that negates the amplitude of ``marked_index``."""
    if n_modes < 2:
        raise TooSmall(f"need at least 2 modes, got {n_modes}")
    if not 0 <= marked_index < n_modes:
        raise IndexOutOfRange(f"marked mode {marked_index} outside 0..{n_modes - 1}")
    diag = np.ones(n_modes, dtype=np.complex128)
    diag[marked_index] = -1.0
    return UnitaryOp(np.diag(diag))


def inversion_about_mean(n_modes: int) -> UnitaryOp:
    """Grover diffusion ``2J/N - I``; reflects every amplitude about the mean."""
    if n_modes < 2:
        raise TooSmall(f"need at least 2 modes, got {n_modes}")
    m = np.full((n_modes, n_modes), 2.0 / n_modes, dtype=np.complex128)
    m[np.diag_indices(n_modes)] -= 1.0
    return UnitaryOp(m)


def multiport_dft(n_modes: int) -> UnitaryOp:
    """N-port beamsplitter as the DFT, ``U[j, k] = exp(+2 pi i jk/N) / sqrt(N)``.

    For N=2 this is ``[[1, 1], [1, -1]] / sqrt(2)``, the Hadamard matrix exactly;
    for larger N the sign of the exponent makes it the inverse of numpy's
    forward FFT convention.
    """
    if n_modes < 2:
        raise TooSmall(f"need at least 2 modes, got {n_modes}")
    # reduce jk mod N before the exponential to keep phases accurate for large N
    jk = np.outer(np.arange(n_modes), np.arange(n_modes)) % n_modes
    return UnitaryOp(np.exp(2j * np.pi * jk / n_modes) / math.sqrt(n_modes))


def default_iterations(n_modes: int) -> int:
    """``round(pi/4 * sqrt(N))``, the conventional Grover iteration count."""
    return int(round(math.pi / 4.0 * math.sqrt(n_modes)))


@dataclass(frozen=True)
class GroverPlan:
    n_modes: int
    marked_index: int
    n_iterations: int

    def __post_init__(self):
        if self.n_modes < 2:
            raise TooSmall(f"need at least 2 modes, got {self.n_modes}")
        if not 0 <= self.marked_index < self.n_modes:
            raise IndexOutOfRange(
                f"marked mode {self.marked_index} outside 0..{self.n_modes - 1}"
            )
        if self.n_iterations < 0:
            raise ValueError(f"n_iterations must be >= 0, got {self.n_iterations}")

    @classmethod
    def with_default_iterations(cls, n_modes: int, marked_index: int) -> GroverPlan:
        return cls(n_modes, marked_index, default_iterations(n_modes))

    @property
    def query_count(self) -> int:
        # one oracle query per iteration
        return self.n_iterations


def grover_run(plan: GroverPlan) -> tuple[SingleParticleState, int]:
    """Run Grover search and return ``(final_state, oracle_queries)``.

    The register starts in mode 0 and the multiport spreads it uniformly; each
    iteration queries the oracle once and then inverts about the mean.
    """
    n = plan.n_modes
    state = apply_unitary(basis_state(n, 0), multiport_dft(n))
    step = inversion_about_mean(n) @ oracle_phase_flip(n, plan.marked_index)
    for _ in range(plan.n_iterations):
        state = apply_unitary(state, step)
    return state, plan.query_count


def grover_success_probability(plan: GroverPlan) -> float:
    state, _ = grover_run(plan)
    return float(abs(state.amplitudes[plan.marked_index]) ** 2)
