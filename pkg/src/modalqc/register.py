"""Single-particle modal register and its classical-field counterpart.

Modes are flat indices ``0..N-1``. A composite label ``(m1, m2, ...)`` over
several degrees of freedom with sizes ``(d1, d2, ...)`` maps to a flat index in
row-major order, see :func:`flatten_mode_label`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    GridTooSmall,
    IndexOutOfRange,
    NonFinite,
    NotNormalized,
    TooSmall,
    ZeroNorm,
)

NORM_TOL = 1e-12
ORTHO_TOL = 1e-10


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SingleParticleState:
    """Normalized amplitudes of one particle spread over N modes."""

    amplitudes: np.ndarray
    n_modes: int = field(init=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size < 2:
            raise TooSmall(f"register needs at least 2 modes, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise NonFinite("amplitudes contain NaN or Inf")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NotNormalized(f"squared norm {norm2!r} deviates from 1")
        object.__setattr__(self, "amplitudes", _frozen(amps))
        object.__setattr__(self, "n_modes", amps.size)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __len__(self):
        return self.n_modes


@dataclass(frozen=True, eq=False)
class ClassicalField:
    """Analytic-signal mode coefficients of a classical wave (arbitrary units)."""

    amplitudes: np.ndarray
    n_modes: int = field(init=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if not np.all(np.isfinite(amps)):
            raise NonFinite("field amplitudes contain NaN or Inf")
        object.__setattr__(self, "amplitudes", _frozen(amps))
        object.__setattr__(self, "n_modes", amps.size)

    @property
    def intensity(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True, eq=False)
class ModeBasis:
    """Orthonormal mode functions sampled on a grid; column ``k`` is mode ``k``."""

    grid: np.ndarray
    functions: np.ndarray

    def __post_init__(self):
        grid = np.array(self.grid, dtype=np.float64).reshape(-1)
        funcs = np.array(self.functions, dtype=np.complex128)
        if funcs.ndim != 2 or funcs.shape[0] != grid.size:
            raise DimensionMismatch(
                f"functions shape {funcs.shape} does not match grid of {grid.size} points"
            )
        if funcs.shape[0] < funcs.shape[1]:
            raise GridTooSmall(f"{funcs.shape[0]} grid points for {funcs.shape[1]} modes")
        gram = funcs.conj().T @ funcs
        dev = np.max(np.abs(gram - np.eye(funcs.shape[1])))
        if dev > ORTHO_TOL:
            raise DimensionMismatch(f"mode functions not orthonormal (max deviation {dev:.3g})")
        object.__setattr__(self, "grid", _frozen(grid))
        object.__setattr__(self, "functions", _frozen(funcs))

    @property
    def n_modes(self) -> int:
        return self.functions.shape[1]

    @property
    def grid_size(self) -> int:
        return self.functions.shape[0]

    def synthesize(self, coefficients) -> np.ndarray:
        """Sample ``sum_k c_k u_k(x)`` on the grid."""
        coeffs = np.asarray(coefficients, dtype=np.complex128)
        if coeffs.shape != (self.n_modes,):
            raise DimensionMismatch(
                f"{coeffs.size} coefficients for a basis of {self.n_modes} modes"
            )
        return self.functions @ coeffs


def new_state(amplitudes: Sequence[complex]) -> SingleParticleState:
    """Normalize ``amplitudes`` into a register state.

    >>> new_state([3, 4j]).amplitudes
    array([0.6+0.j , 0. +0.8j])
    """
    amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
    if amps.size < 2:
        raise TooSmall(f"register needs at least 2 modes, got {amps.size}")
    if not np.all(np.isfinite(amps)):
        raise NonFinite("amplitudes contain NaN or Inf")
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise ZeroNorm("cannot normalize an all-zero amplitude vector")
    return SingleParticleState(amps / norm)


def basis_state(n_modes: int, mode_index: int) -> SingleParticleState:
    if n_modes < 2:
        raise TooSmall(f"register needs at least 2 modes, got {n_modes}")
    if not 0 <= mode_index < n_modes:
        raise IndexOutOfRange(f"mode {mode_index} outside 0..{n_modes - 1}")
    amps = np.zeros(n_modes, dtype=np.complex128)
    amps[mode_index] = 1.0
    return SingleParticleState(amps)


def uniform_state(n_modes: int) -> SingleParticleState:
    return new_state(np.ones(n_modes))


def random_state(n_modes: int, rng: np.random.Generator) -> SingleParticleState:
    """Haar-random state drawn from a complex Gaussian vector."""
    z = rng.standard_normal(n_modes) + 1j * rng.standard_normal(n_modes)
    return new_state(z)


def to_classical_field(state: SingleParticleState) -> ClassicalField:
    # one-to-one: mode coefficient psi_k becomes field coefficient E_k unchanged
    return ClassicalField(state.amplitudes.copy())


def flatten_mode_label(label: Sequence[int], dims: Sequence[int]) -> int:
    """Row-major flat index of a multi-degree-of-freedom mode label."""
    if len(label) != len(dims):
        raise DimensionMismatch(f"label {tuple(label)} does not match dims {tuple(dims)}")
    index = 0
    for value, dim in zip(label, dims):
        if not 0 <= value < dim:
            raise IndexOutOfRange(f"label component {value} outside 0..{dim - 1}")
        index = index * dim + value
    return index


def unflatten_mode_index(index: int, dims: Sequence[int]) -> tuple[int, ...]:
    total = int(np.prod(dims))
    if not 0 <= index < total:
        raise IndexOutOfRange(f"mode {index} outside 0..{total - 1}")
    return tuple(int(v) for v in np.unravel_index(index, tuple(dims)))


def fourier_mode_basis(grid_size: int, n_modes: int) -> ModeBasis:
    """First ``n_modes`` discrete Fourier modes on a uniform grid of ``grid_size`` points.

    The grid is ``x_j = j / grid_size`` and the inner product is the plain sum
    over grid points, so ``u_k(x_j) = exp(2 pi i k x_j) / sqrt(grid_size)``.
    """
    if n_modes < 1:
        raise TooSmall("need at least one mode")
    if grid_size < n_modes:
        raise GridTooSmall(f"grid of {grid_size} points cannot hold {n_modes} orthonormal modes")
    j = np.arange(grid_size)
    k = np.arange(n_modes)
    funcs = np.exp(2j * np.pi * np.outer(j, k) / grid_size) / np.sqrt(grid_size)
    return ModeBasis(j / grid_size, funcs)


def identity_mode_basis(n_modes: int) -> ModeBasis:
    """Mode ``k`` is localized on grid point ``k``."""
    return ModeBasis(np.arange(n_modes, dtype=np.float64), np.eye(n_modes, dtype=np.complex128))
