"""Steady-state transparency physics: weak-probe coherence, susceptibility
spectrum, and the dispersive group delay.

The weak-probe steady state of the probe-transition coherence is

    rho13 = -(i wp / 2) (g2 + i d2) / [ (G13 + i dp)(g2 + i d2) + (wc/2)^2 ]

with everything angular, d2 = dp - dc, g2 the spin dephasing rate and
G13 the total optical coherence decay rate (pure dephasing plus half the
population decay out of |3>).  The overall sign follows the simulator's
phase convention, in which absorption shows up as Im(rho13) < 0; the
tabulated susceptibility uses the conjugate so that absorption is a
non-negative chi_im and the transparency window carries a positive
dispersion slope.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import KHZ_TO_RAD_PER_US, C_MM_PER_US, MediumParams
from .errors import GridResolutionError, RegimeError

#: Weak-probe validity: wp at most this fraction of wc (or, with the
#: coupling off, of the optical linewidth) keeps saturation negligible.
WEAK_PROBE_RATIO = 0.2


@dataclass(frozen=True)
class Spectrum:
    """Susceptibility samples over a probe-detuning grid (arbitrary units)."""

    delta_p_khz: np.ndarray
    chi_re: np.ndarray
    chi_im: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.delta_p_khz, dtype=float)
        re = np.asarray(self.chi_re, dtype=float)
        im = np.asarray(self.chi_im, dtype=float)
        if not (d.shape == re.shape == im.shape) or d.ndim != 1:
            raise ValueError("grid and chi sequences must be 1-d and consistent")
        for arr in (d, re, im):
            arr.setflags(write=False)
        object.__setattr__(self, "delta_p_khz", d)
        object.__setattr__(self, "chi_re", re)
        object.__setattr__(self, "chi_im", im)


@dataclass(frozen=True)
class GroupDelayResult:
    """Dispersion-slope delay prediction at line center."""

    delay_us: float          # group delay beyond the vacuum transit
    v_g_rel: float           # group velocity relative to c
    vacuum_transit_us: float
    slope: float             # dRe(chi)/d(delta_p), angular units


def _check_weak_probe(omega_p_khz: float, omega_c_khz: float, params: MediumParams) -> None:
    gamma13_eff = params.gamma13_khz + 0.5 * (params.gamma31_khz + params.gamma32_khz)
    limit = WEAK_PROBE_RATIO * max(omega_c_khz, gamma13_eff)
    if omega_p_khz > limit:
        raise RegimeError(
            f"weak-probe regime violated: omega_p = {omega_p_khz} kHz exceeds "
            f"{WEAK_PROBE_RATIO} * max(omega_c, gamma13_eff) = {limit:.4g} kHz"
        )


def steady_state_coherence(params: MediumParams, delta_p_khz: float,
                           omega_p_khz: float, omega_c_khz: float,
                           delta_c_khz: float = 0.0) -> complex:
    """Analytic weak-probe steady-state rho13 (complex, dimensionless)."""
    _check_weak_probe(omega_p_khz, omega_c_khz, params)
    k = KHZ_TO_RAD_PER_US
    wp = omega_p_khz * k
    wc = omega_c_khz * k
    dp = delta_p_khz * k
    d2 = (delta_p_khz - delta_c_khz) * k
    g2 = params.gamma12_khz * k
    g13 = (params.gamma13_khz + 0.5 * (params.gamma31_khz + params.gamma32_khz)) * k
    denom = (g13 + 1j * dp) * (g2 + 1j * d2) + (wc / 2.0) ** 2
    return complex(-(1j * wp / 2.0) * (g2 + 1j * d2) / denom)


def susceptibility_spectrum(params: MediumParams, delta_p_grid_khz: np.ndarray,
                            omega_p_khz: float, omega_c_khz: float,
                            delta_c_khz: float = 0.0) -> Spectrum:
    """Pointwise steady-state susceptibility, scaled by n_density_rel.

    chi(dp) = 2 * n_density_rel * conj(rho13(dp)) / wp with wp angular;
    chi_im >= 0 is absorption for passive parameters and chi_re carries
    the dispersion used for the group delay.
    """
    grid = np.asarray(delta_p_grid_khz, dtype=float)
    wp = omega_p_khz * KHZ_TO_RAD_PER_US
    chi = np.empty(len(grid), dtype=complex)
    for i, dp in enumerate(grid):
        rho13 = steady_state_coherence(params, float(dp), omega_p_khz,
                                       omega_c_khz, delta_c_khz)
        chi[i] = 2.0 * params.n_density_rel * np.conj(rho13) / wp
    return Spectrum(delta_p_khz=grid, chi_re=chi.real, chi_im=chi.imag)


def group_delay(spectrum: Spectrum, params: MediumParams) -> GroupDelayResult:
    """Group delay from the dispersion slope at line center.

    Uses a centered 5-point derivative of chi_re at delta_p = 0; the
    grid must be uniform and contain 0 with two neighbours on each side.
    delay = 0.5 * coupling_const * length_mm * dRe(chi)/d(delta)
    (angular), which is exactly what the slab transport produces in the
    linear regime; the vacuum transit L/c is reported separately and is
    negligible on us scales.
    """
    grid = spectrum.delta_p_khz
    if len(grid) < 5:
        raise GridResolutionError("need at least 5 grid points for the 5-point derivative")
    steps = np.diff(grid)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise GridResolutionError("grid must be uniformly spaced")
    center = int(np.argmin(np.abs(grid)))
    if abs(grid[center]) > 1e-12:
        raise GridResolutionError("grid must contain delta_p = 0")
    if center < 2 or center > len(grid) - 3:
        raise GridResolutionError("delta_p = 0 needs two neighbours on each side")

    h = steps[0] * KHZ_TO_RAD_PER_US
    f = spectrum.chi_re
    slope = (-f[center + 2] + 8.0 * f[center + 1]
             - 8.0 * f[center - 1] + f[center - 2]) / (12.0 * h)

    delay_us = 0.5 * params.coupling_const * params.length_mm * slope
    vacuum_transit_us = params.length_mm / C_MM_PER_US
    v_g_rel = vacuum_transit_us / (vacuum_transit_us + delay_us)
    return GroupDelayResult(delay_us=float(delay_us), v_g_rel=float(v_g_rel),
                            vacuum_transit_us=float(vacuum_transit_us),
                            slope=float(slope))
