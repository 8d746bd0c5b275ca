"""Measurement-driven ground-state cooling of a mechanical resonator.

A flux qubit exchanges single quanta with a mechanical resonator; repeatedly
projecting the qubit onto its ground state filters phonons out of the
resonator.  This package provides the truncated-space numerical kernels, the
closed-form measurement operators, the cooling protocol engine (equal and
random measurement intervals, post-selected and sampled trajectories), a
Lindblad integrator for robustness against resonator damping, and a
reproducible experiment CLI.
"""

__version__ = "0.1.0"

from .core import (
    DensityMatrix,
    DomainError,
    Space,
    TruncationError,
    TruncationPolicy,
    default_n_max,
    matrix_exponential,
    min_n_max_for_thermal,
    partial_trace_qubit,
    tensor_embed,
    thermal_density_matrix,
    thermal_occupation,
)
from .jc import (
    DressedSpectrum,
    EffectiveEvolution,
    SystemParams,
    build_full_hamiltonian,
    build_jc_hamiltonian,
    dressed_spectrum,
    effective_eigenvalues,
    excited_kraus_pair,
    kraus_pair,
)
from .opensys import (
    ConfigurationError,
    DissipationParams,
    IntegratorConfig,
    NumericalFailure,
    damped_protocol_run,
    default_config,
    lindblad_evolve,
)
from .protocol import (
    CoolingRecord,
    MeasurementSchedule,
    OutcomePolicy,
    RunMode,
    ScheduleKind,
    decay_envelope,
    generate_schedule,
    observables,
    postselected_run,
    sample_trajectory,
    survival_ensemble,
)

__all__ = [
    "DensityMatrix",
    "DomainError",
    "Space",
    "TruncationError",
    "TruncationPolicy",
    "default_n_max",
    "matrix_exponential",
    "min_n_max_for_thermal",
    "partial_trace_qubit",
    "tensor_embed",
    "thermal_density_matrix",
    "thermal_occupation",
    "DressedSpectrum",
    "EffectiveEvolution",
    "SystemParams",
    "build_full_hamiltonian",
    "build_jc_hamiltonian",
    "dressed_spectrum",
    "effective_eigenvalues",
    "excited_kraus_pair",
    "kraus_pair",
    "ConfigurationError",
    "DissipationParams",
    "IntegratorConfig",
    "NumericalFailure",
    "damped_protocol_run",
    "default_config",
    "lindblad_evolve",
    "CoolingRecord",
    "MeasurementSchedule",
    "OutcomePolicy",
    "RunMode",
    "ScheduleKind",
    "decay_envelope",
    "generate_schedule",
    "observables",
    "postselected_run",
    "sample_trajectory",
    "survival_ensemble",
    "__version__",
]
