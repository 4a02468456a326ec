"""Single-member density-matrix evolution under time-dependent pulses.

The rotating-frame, rotating-wave Hamiltonian is

    H = -dp |3><3| - (dp - dc + dinh) |2><2|
        - (wp/2)(|1><3| + h.c.) - (wc/2)(|2><3| + h.c.)

(angular units), evolved as drho/dt = -i[H, rho] plus relaxation: pure
dephasing of rho12/rho13/rho23 at gamma12/gamma13/gamma23 and population
decay |3> -> |1> at gamma31 and |3> -> |2> at gamma32, with the decay
routed back into the ground states (closed relaxation).  The coupling
sign makes the rho12 component of the Liouvillian read

    drho12/dt = -i(wc/2) rho13 + i(wp/2) rho32 - i(dp - dc + dinh) rho12
                - gamma12 rho12,

which is the tested conformance target for the spin-coherence equation
of motion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import (
    KHZ_TO_RAD_PER_US,
    DensityMatrix,
    MediumParams,
    PulseSequence,
    TimeSeries,
    Transition,
    require_valid,
    series_from_rho_samples,
)
from .errors import ConfigError

#: Upper bound on dt * (2*pi*fastest rate); beyond this RK4 accuracy degrades.
STEP_GUARD = 0.1


@dataclass(frozen=True)
class LiouvillianInputs:
    """Instantaneous drive and detuning values seen by one ensemble member."""

    omega_p_khz: float
    omega_c_khz: float
    delta_p_khz: float
    delta_c_khz: float
    delta_inh_khz: float
    params: MediumParams

    def angular(self) -> tuple[float, float, float, float, float, float, float, float, float]:
        k = KHZ_TO_RAD_PER_US
        p = self.params
        d2 = (self.delta_p_khz - self.delta_c_khz + self.delta_inh_khz) * k
        return (
            self.omega_p_khz * k,
            self.omega_c_khz * k,
            self.delta_p_khz * k,
            d2,
            p.gamma12_khz * k,
            p.gamma13_khz * k,
            p.gamma23_khz * k,
            p.gamma31_khz * k,
            p.gamma32_khz * k,
        )


def liouvillian(dm: DensityMatrix | np.ndarray, inputs: LiouvillianInputs) -> np.ndarray:
    """Right-hand side drho/dt (per us) for a valid state."""
    rho = require_valid(dm)
    wp, wc, dp, d2, g12, g13, g23, gp31, gp32 = inputs.angular()
    return _kernels.rhs_matrix(
        np.asarray(rho, dtype=complex),
        complex(wp), complex(wc), dp, d2, g12, g13, g23, gp31, gp32,
    )


def check_step_size(dt_us: float, seq: PulseSequence, params: MediumParams,
                    delta_inh_khz: float = 0.0) -> None:
    """Enforce dt * (2*pi * fastest rate) < STEP_GUARD, naming the offender."""
    if dt_us <= 0:
        raise ConfigError("dt_us must be positive")
    candidates = [seq.max_rate_khz(), params.max_rate_khz(),
                  (abs(delta_inh_khz), "delta_inh_khz")]
    worst, name = max(candidates, key=lambda c: c[0])
    if dt_us * worst * KHZ_TO_RAD_PER_US >= STEP_GUARD:
        limit = STEP_GUARD / (worst * KHZ_TO_RAD_PER_US)
        raise ConfigError(
            f"dt_us = {dt_us} violates the step-size guard: {name} = {worst} kHz "
            f"requires dt_us < {limit:.4g}"
        )


def _stage_envelopes(seq: PulseSequence, n_steps: int, dt_us: float
                     ) -> tuple[np.ndarray, np.ndarray]:
    """Per-step (start, midpoint, end) envelope samples in rad/us.

    Step boundaries are sampled one-sidedly (a hair inside the step), so
    a square pulse switching exactly on a boundary presents each step
    with the smooth branch it actually integrates; RK4 then keeps full
    order through the switch.
    """
    eps = 1e-7 * dt_us
    t0 = np.arange(n_steps) * dt_us
    stages = np.empty((n_steps, 3))
    out = []
    for transition in (Transition.PROBE, Transition.COUPLING):
        stages[:, 0] = seq.envelope(transition, t0 + eps)
        stages[:, 1] = seq.envelope(transition, t0 + 0.5 * dt_us)
        stages[:, 2] = seq.envelope(transition, t0 + (dt_us - eps))
        out.append((stages * KHZ_TO_RAD_PER_US).astype(complex))
    return out[0], out[1]


def evolve_states(rho0: DensityMatrix, seq: PulseSequence, params: MediumParams,
                  delta_inh_khz: float = 0.0, dt_us: float = 0.01,
                  output_stride: int = 1) -> tuple[np.ndarray, np.ndarray, DensityMatrix]:
    """Like evolve, but returns the sampled 3x3 states themselves.

    Returns (t_us, states, final) with states of shape (n_samples, 3, 3);
    useful for conservation checks on every sample.
    """
    rho_start = require_valid(rho0)
    check_step_size(dt_us, seq, params, delta_inh_khz)
    if output_stride < 1:
        raise ConfigError("output_stride must be >= 1")

    n_steps = int(round(seq.total_duration_us / dt_us))
    if n_steps < 1:
        raise ConfigError("sequence shorter than one time step")

    wp_stages, wc_stages = _stage_envelopes(seq, n_steps, dt_us)
    k = KHZ_TO_RAD_PER_US
    dp = seq.detuning(Transition.PROBE) * k
    d2 = (seq.detuning(Transition.PROBE) - seq.detuning(Transition.COUPLING)
          + delta_inh_khz) * k

    samples, _, rho_final = _kernels.evolve_kernel(
        np.asarray(rho_start, dtype=complex), wp_stages, wc_stages,
        dp, d2,
        params.gamma12_khz * k, params.gamma13_khz * k, params.gamma23_khz * k,
        params.gamma31_khz * k, params.gamma32_khz * k,
        dt_us, output_stride,
    )
    t_us = np.arange(samples.shape[0]) * (dt_us * output_stride)
    return t_us, samples, DensityMatrix(rho_final)


def evolve(rho0: DensityMatrix, seq: PulseSequence, params: MediumParams,
           delta_inh_khz: float = 0.0, dt_us: float = 0.01,
           output_stride: int = 1) -> tuple[TimeSeries, DensityMatrix]:
    """Fixed-step RK4 integration over a pulse sequence.

    Channels are sampled every ``output_stride`` steps.  The returned
    final state is the full-resolution endpoint regardless of stride.
    """
    t_us, samples, rho_final = evolve_states(rho0, seq, params, delta_inh_khz,
                                             dt_us, output_stride)
    return series_from_rho_samples(t_us, samples), rho_final
