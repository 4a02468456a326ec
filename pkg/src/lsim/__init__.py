"""Numerical model of slow light and delayed optical routing in a
three-level lambda system: density-matrix pulse dynamics, inhomogeneous
spin-ensemble averaging, 1-d slow-light transport, and conversion of
stored spin coherence into an optical signal.
"""

from .bloch import LiouvillianInputs, evolve, liouvillian
from .core import (
    DensityMatrix,
    EdgeShape,
    MediumParams,
    Pulse,
    PulseSequence,
    SpectralMap,
    TimeSeries,
    Transition,
    ValidationReport,
    WaveVector,
    pulse_envelope,
    validate_density_matrix,
)
from .eit import GroupDelayResult, Spectrum, group_delay, steady_state_coherence, susceptibility_spectrum
from .ensemble import (
    Distribution,
    EnsembleSpec,
    Sampling,
    ensemble_evolve,
    fid_decay_time,
    sample_detunings,
    two_photon_map,
)
from .fwm import (
    ConversionFit,
    ReadoutResult,
    detector_intensity,
    phase_match,
    readout_conversion,
    sweep_readout,
    verify_conversion_law,
)
from .propagation import PropagationGrid, PropagationResult, extract_delay, propagate_pulse

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix", "Pulse", "PulseSequence", "MediumParams", "TimeSeries",
    "SpectralMap", "WaveVector", "Transition", "EdgeShape", "ValidationReport",
    "pulse_envelope", "validate_density_matrix",
    "LiouvillianInputs", "liouvillian", "evolve",
    "EnsembleSpec", "Distribution", "Sampling", "sample_detunings",
    "ensemble_evolve", "fid_decay_time", "two_photon_map",
    "Spectrum", "GroupDelayResult", "steady_state_coherence",
    "susceptibility_spectrum", "group_delay",
    "PropagationGrid", "PropagationResult", "propagate_pulse", "extract_delay",
    "ReadoutResult", "ConversionFit", "readout_conversion", "verify_conversion_law",
    "sweep_readout", "phase_match", "detector_intensity",
    "__version__",
]
