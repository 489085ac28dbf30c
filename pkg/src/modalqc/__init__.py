"""Single-particle modal quantum processor and its classical wave twin."""

from .classical_twin import (
    CorrelationMatrix,
    classical_correlation,
    equivalence_check,
    propagate_field,
    quantum_correlation,
)
from .decoder import (
    DetectorGroup,
    Histogram,
    ModeFilter,
    ReadoutRecord,
    binary_search_poll,
    detector_group,
    group_expectation,
    mode_filter,
    mode_probability,
    projector_expectation,
    repeated_readout,
    sample_readout,
)
from .processor import (
    GroverPlan,
    UnitaryOp,
    apply_unitary,
    grover_run,
    inversion_about_mean,
    multiport_dft,
    oracle_phase_flip,
)
from .register import (
    ClassicalField,
    ModeBasis,
    SingleParticleState,
    basis_state,
    fourier_mode_basis,
    new_state,
    to_classical_field,
)
from .resources import ComparisonReport, ResourceLedger, audit_grover, compare_with_classical

__version__ = "0.1.0"
