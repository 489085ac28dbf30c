"""Classical wave interferometer that mirrors the single-particle register.

Both correlation functions are evaluated at one readout time on the grid of a
:class:`~modalqc.register.ModeBasis`, with proportionality constant 1.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .processor import UnitaryOp, apply_unitary
from .register import ClassicalField, ModeBasis, SingleParticleState, to_classical_field


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """``values[i, j] = conj(f(x_i)) * f(x_j)`` on ``grid``."""

    values: np.ndarray
    grid: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.trace(self.values).real)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.values - self.values.conj().T)))

    def to_csv(self) -> str:
        """Row-major dump: one line per matrix row, ``re,im`` pairs per column."""
        g = self.values.shape[1]
        buf = io.StringIO()
        buf.write(",".join(f"re_{j},im_{j}" for j in range(g)) + "\n")
        for row in self.values:
            buf.write(",".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row) + "\n")
        return buf.getvalue()


def _check_dims(n_modes: int, basis: ModeBasis):
    if basis.n_modes != n_modes:
        raise DimensionMismatch(f"basis has {basis.n_modes} modes, register has {n_modes}")


def propagate_field(field: ClassicalField, u: UnitaryOp) -> ClassicalField:
    if u.n_modes != field.n_modes:
        raise DimensionMismatch(f"unitary on {u.n_modes} modes, field has {field.n_modes}")
    return ClassicalField(u.matrix @ field.amplitudes)


def quantum_correlation(state: SingleParticleState, basis: ModeBasis) -> CorrelationMatrix:
    """First-order correlation of the single-particle wavefunction on the grid."""
    _check_dims(state.n_modes, basis)
    psi = basis.synthesize(state.amplitudes)
    return CorrelationMatrix(np.outer(psi.conj(), psi), basis.grid)


def classical_correlation(field: ClassicalField, basis: ModeBasis) -> CorrelationMatrix:
    """Mutual coherence ``E*(x) E(x')`` of the classical analytic signal."""
    _check_dims(field.n_modes, basis)
    # built with einsum rather than synthesize/outer so the two sides share no code path
    e = np.einsum("gk,k->g", basis.functions, field.amplitudes)
    return CorrelationMatrix(np.einsum("i,j->ij", e.conj(), e), basis.grid)


def equivalence_check(state: SingleParticleState, u: UnitaryOp, basis: ModeBasis) -> float:
    """Max elementwise gap between quantum and classical correlations after ``u``."""
    _check_dims(state.n_modes, basis)
    quantum = quantum_correlation(apply_unitary(state, u), basis)
    classical = classical_correlation(propagate_field(to_classical_field(state), u), basis)
    return float(np.max(np.abs(quantum.values - classical.values)))
