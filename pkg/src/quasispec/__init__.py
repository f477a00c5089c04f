"""Numerical laboratory for the Fibonacci Hamiltonian.

Builds truncated operators from the quasiperiodic potential family, extracts
spectral measures and the density of states through an exact phase
partition, measures the Fourier decay of the density of states, probes
absolute continuity of convolution powers through an L^2 diagnostic, and
computes phase-averaged transition amplitudes at large truncation windows.
"""

from .analysis import (
    DecayFit,
    decay_pipeline,
    envelope,
    fit_decay,
    l2_growth_diagnostic,
    min_power_for_l2,
)
from .cli import RunConfig, main
from .dynamics import (
    AmplitudeSeries,
    StateVector,
    escape_block_maxima,
    evolve_chebyshev,
    evolve_exact,
    l1_decomposition_check,
    phase_averaged_amplitude,
    shift_state,
)
from .exceptions import (
    CapExceededError,
    ConfigError,
    EigensolverError,
    LightConeError,
    NumericalError,
    OutputError,
    QuasispecError,
)
from .measures import (
    AtomicMeasure,
    FourierTrace,
    convolution_power,
    convolve_binned,
    convolve_exact,
    fourier,
    from_atoms,
    point_mass,
    tv_distance,
)
from .operator import (
    ALPHA,
    ModelParams,
    PhasePartition,
    TridiagonalOperator,
    build_hamiltonian,
    frac,
    phase_partition,
    potential_value,
    shift_hamiltonian_check,
    tensor_sum,
)
from .spectral import (
    EigenSystem,
    density_of_states,
    density_of_states_riemann,
    dos_fourier_trace,
    dos_moments,
    eigendecompose,
    spectral_measure,
    tensor_spectral_check,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA",
    "AmplitudeSeries",
    "AtomicMeasure",
    "CapExceededError",
    "ConfigError",
    "DecayFit",
    "EigenSystem",
    "EigensolverError",
    "FourierTrace",
    "LightConeError",
    "ModelParams",
    "NumericalError",
    "OutputError",
    "PhasePartition",
    "QuasispecError",
    "RunConfig",
    "StateVector",
    "TridiagonalOperator",
    "build_hamiltonian",
    "convolution_power",
    "convolve_binned",
    "convolve_exact",
    "decay_pipeline",
    "density_of_states",
    "density_of_states_riemann",
    "dos_fourier_trace",
    "dos_moments",
    "eigendecompose",
    "envelope",
    "escape_block_maxima",
    "evolve_chebyshev",
    "evolve_exact",
    "fit_decay",
    "fourier",
    "frac",
    "from_atoms",
    "l1_decomposition_check",
    "l2_growth_diagnostic",
    "main",
    "min_power_for_l2",
    "phase_averaged_amplitude",
    "phase_partition",
    "point_mass",
    "potential_value",
    "shift_hamiltonian_check",
    "shift_state",
    "spectral_measure",
    "tensor_spectral_check",
    "tensor_sum",
    "tv_distance",
]
