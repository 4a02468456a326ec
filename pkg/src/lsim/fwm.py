"""Read-out stage: conversion of stored spin coherence into an optical
signal, the derivative conversion law, Rabi-oscillation onset, detector
intensity and wavevector phase matching.

The read-out drive acts on the |2>-|3> transition of the same
three-level system; the generated field is read from the probe-transition
coherence.  The ``e_d_arb`` channel is -Im(rho13), the emitted-field
quadrature in which the retrieved signal equals the negative time
derivative of Re(rho12) with a positive scale (the photodiode observable
|E_D|^2 is insensitive to this sign choice).  The emitted field does not
back-act on the atoms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bloch import evolve
from .core import (
    DensityMatrix,
    MediumParams,
    Pulse,
    PulseSequence,
    TimeSeries,
    Transition,
    WaveVector,
)
from .errors import FitError, RegimeError

#: Channel excursions below this floor do not count as slope reversals.
OSCILLATION_NOISE_FLOOR = 1e-6


@dataclass(frozen=True)
class ConversionFit:
    """Single-scale least-squares fit of e_d against -d/dt Re(rho12)."""

    scale: float
    pearson_r: float
    max_residual: float  # relative to the peak of e_d


@dataclass(frozen=True)
class ReadoutResult:
    """Time traces and diagnostics of one read-out run."""

    series: TimeSeries
    omega_a_khz: float
    oscillation_detected: bool
    conversion_fit: ConversionFit | None = None

    def __post_init__(self):
        fit = self.conversion_fit
        if fit is not None and not (-1.0 <= fit.pearson_r <= 1.0):
            raise ValueError(f"pearson_r out of [-1, 1]: {fit.pearson_r}")


def count_slope_reversals(x: np.ndarray, floor: float = OSCILLATION_NOISE_FLOOR) -> int:
    """Number of sign changes of the finite-difference slope of x.

    Differences smaller than ``floor`` are treated as flat and ignored.
    """
    d = np.diff(np.asarray(x, dtype=float))
    signs = np.sign(d[np.abs(d) > floor])
    if len(signs) < 2:
        return 0
    return int(np.sum(signs[1:] * signs[:-1] < 0))


def readout_conversion(rho_start: DensityMatrix, readout_pulse: Pulse,
                       params: MediumParams, dt_us: float = 0.01) -> ReadoutResult:
    """Evolve a stored state under the read-out drive alone.

    The returned series spans exactly the pulse window (time axis
    relative to the pulse start), so the conversion-law fit sees only
    driven samples.  Oscillation is flagged when Im(rho13) shows at
    least two slope-sign reversals within the pulse.
    """
    if readout_pulse.transition is not Transition.COUPLING:
        raise RegimeError("the read-out drive must act on the coupling (|2>-|3>) transition")
    window = readout_pulse.t_off_us - readout_pulse.t_on_us
    shifted = Pulse(
        transition=Transition.COUPLING,
        rabi_khz=readout_pulse.rabi_khz,
        t_on_us=0.0,
        t_off_us=window,
        edge_shape=readout_pulse.edge_shape,
        edge_us=readout_pulse.edge_us,
        detuning_khz=readout_pulse.detuning_khz,
    )
    seq = PulseSequence([shifted], total_duration_us=window)
    series, _ = evolve(rho_start, seq, params, dt_us=dt_us)
    oscillating = count_slope_reversals(series.channel("im_rho13")) >= 2
    return ReadoutResult(series=series, omega_a_khz=readout_pulse.rabi_khz,
                         oscillation_detected=oscillating)


def verify_conversion_law(result: ReadoutResult) -> ConversionFit:
    """Fit e_d_arb = scale * (-d/dt Re rho12) over the read-out trace.

    The derivative is taken by centered differences on the interior
    samples.  Returns the fitted scale, the Pearson correlation and the
    maximum residual relative to the peak of e_d.
    """
    ts = result.series
    t = ts.t_us
    re12 = ts.channel("re_rho12")
    e_d = ts.channel("e_d_arb")
    if len(t) < 5:
        raise FitError("read-out trace too short for a derivative fit")

    dt = t[1] - t[0]
    deriv = -(re12[2:] - re12[:-2]) / (2.0 * dt)
    y = e_d[1:-1]

    peak = float(np.max(np.abs(y)))
    sxx = float(np.dot(deriv, deriv))
    if peak == 0.0 or sxx == 0.0:
        raise FitError("degenerate (all-zero) read-out trace")

    scale = float(np.dot(deriv, y)) / sxx
    sy = np.std(y)
    sx = np.std(deriv)
    if sy == 0.0 or sx == 0.0:
        raise FitError("constant read-out trace; nothing to correlate")
    pearson = float(np.corrcoef(deriv, y)[0, 1])
    residual = float(np.max(np.abs(y - scale * deriv))) / peak
    return ConversionFit(scale=scale, pearson_r=pearson, max_residual=residual)


def sweep_readout(rho_start: DensityMatrix, omega_a_values_khz, pulse_template: Pulse,
                  params: MediumParams, dt_us: float = 0.01) -> list[ReadoutResult]:
    """readout_conversion over a list of drive amplitudes, in order."""
    results = []
    for omega_a in omega_a_values_khz:
        pulse = Pulse(
            transition=pulse_template.transition,
            rabi_khz=float(omega_a),
            t_on_us=pulse_template.t_on_us,
            t_off_us=pulse_template.t_off_us,
            edge_shape=pulse_template.edge_shape,
            edge_us=pulse_template.edge_us,
            detuning_khz=pulse_template.detuning_khz,
        )
        result = readout_conversion(rho_start, pulse, params, dt_us=dt_us)
        fit = verify_conversion_law(result)
        results.append(ReadoutResult(series=result.series,
                                     omega_a_khz=result.omega_a_khz,
                                     oscillation_detected=result.oscillation_detected,
                                     conversion_fit=fit))
    return results


def phase_match(k_c: WaveVector, k_p: WaveVector, k_a: WaveVector,
                omega_d_over_c: float) -> tuple[WaveVector, float]:
    """Generated wavevector k_d = k_c - k_p + k_a and its mismatch.

    The mismatch is | |k_d| - omega_d/c |, i.e. how far the geometric
    wavevector sits from the shell the generated frequency propagates on.
    """
    k_d = k_c - k_p + k_a
    return k_d, abs(k_d.norm() - omega_d_over_c)


def detector_intensity(ts: TimeSeries) -> np.ndarray:
    """Photodiode intensity: pointwise square of the emitted-field channel."""
    e_d = ts.channel("e_d_arb")
    return e_d ** 2
