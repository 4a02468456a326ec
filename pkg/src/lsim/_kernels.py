"""Compiled inner loops for density-matrix integration.

All quantities entering these kernels are angular (rad/us).  Envelopes
are supplied as per-step stage arrays of shape (n, 3): columns hold the
value at the step start (right-sided limit), midpoint, and step end
(left-sided limit).  One-sided limits keep RK4 at full order when a
square pulse switches exactly on a step boundary.  The master-equation
right-hand side is written out element by element; basis indices 0, 1, 2
are the two ground states and the excited state.
"""

import numpy as np
from numba import njit

__all__ = ["rhs_matrix", "evolve_kernel"]


@njit(cache=True, nogil=True)
def _rhs(rho, out, wp, wc, dp, d2, g12, g13, g23, gp31, gp32):
    """out = -i[H, rho] + relaxation, for one instant.

    H = -dp|3><3| - d2|2><2| - (wp/2)(|1><3| + h.c.) - (wc/2)(|2><3| + h.c.)
    The coupling sign is fixed by requiring the rho12 equation to match
    the spin-coherence equation of motion verbatim (tested invariant).
    """
    h01 = 0.0 + 0.0j
    h02 = -0.5 * wp
    h12 = -0.5 * wc
    h11 = -d2 + 0.0j
    h22 = -dp + 0.0j

    r00 = rho[0, 0]
    r01 = rho[0, 1]
    r02 = rho[0, 2]
    r10 = rho[1, 0]
    r11 = rho[1, 1]
    r12 = rho[1, 2]
    r20 = rho[2, 0]
    r21 = rho[2, 1]
    r22 = rho[2, 2]

    h20 = np.conj(h02)
    h21 = np.conj(h12)

    # commutator [H, rho]
    c00 = h01 * r10 + h02 * r20 - (r01 * np.conj(h01) + r02 * h20)
    c01 = h01 * r11 + h02 * r21 - (r00 * h01 + r01 * h11 + r02 * h21)
    c02 = h01 * r12 + h02 * r22 - (r00 * h02 + r01 * h12 + r02 * h22)
    c11 = h11 * r11 + np.conj(h01) * r01 + h12 * r21 - (r10 * h01 + r11 * h11 + r12 * h21)
    c12 = np.conj(h01) * r02 + h11 * r12 + h12 * r22 - (r10 * h02 + r11 * h12 + r12 * h22)
    c22 = h20 * r02 + h21 * r12 + h22 * r22 - (r20 * h02 + r21 * h12 + r22 * h22)

    gpop = gp31 + gp32
    gopt = 0.5 * gpop

    out[0, 0] = -1j * c00 + gp31 * r22
    out[0, 1] = -1j * c01 - g12 * r01
    out[0, 2] = -1j * c02 - (g13 + gopt) * r02
    out[1, 1] = -1j * c11 + gp32 * r22
    out[1, 2] = -1j * c12 - (g23 + gopt) * r12
    out[2, 2] = -1j * c22 - gpop * r22
    out[1, 0] = np.conj(out[0, 1])
    out[2, 0] = np.conj(out[0, 2])
    out[2, 1] = np.conj(out[1, 2])


@njit(cache=True, nogil=True)
def rhs_matrix(rho, wp, wc, dp, d2, g12, g13, g23, gp31, gp32):
    """Allocating wrapper around the in-place right-hand side."""
    out = np.empty((3, 3), dtype=np.complex128)
    _rhs(rho, out, wp, wc, dp, d2, g12, g13, g23, gp31, gp32)
    return out


@njit(cache=True, nogil=True)
def evolve_kernel(rho0, wp_stages, wc_stages, dp, d2, g12, g13, g23, gp31, gp32,
                  dt, stride):
    """Fixed-step RK4 march of the master equation.

    Returns (samples, rho13_trace, rho_final):
      samples      -- density matrices at step indices 0, stride, 2*stride, ...
      rho13_trace  -- rho[0, 2] at every full step (n+1 values)
      rho_final    -- state after the last step
    The state is re-Hermitized after every step, which pins the
    Hermiticity defect at the rounding floor without touching the trace.
    """
    n = wp_stages.shape[0]
    n_samples = n // stride + 1
    samples = np.empty((n_samples, 3, 3), dtype=np.complex128)
    rho13 = np.empty(n + 1, dtype=np.complex128)

    rho = rho0.copy()
    k1 = np.empty((3, 3), dtype=np.complex128)
    k2 = np.empty((3, 3), dtype=np.complex128)
    k3 = np.empty((3, 3), dtype=np.complex128)
    k4 = np.empty((3, 3), dtype=np.complex128)
    tmp = np.empty((3, 3), dtype=np.complex128)

    samples[0] = rho
    rho13[0] = rho[0, 2]
    s = 1
    for step in range(n):
        wp0, wpm, wp1 = wp_stages[step, 0], wp_stages[step, 1], wp_stages[step, 2]
        wc0, wcm, wc1 = wc_stages[step, 0], wc_stages[step, 1], wc_stages[step, 2]

        _rhs(rho, k1, wp0, wc0, dp, d2, g12, g13, g23, gp31, gp32)
        for i in range(3):
            for j in range(3):
                tmp[i, j] = rho[i, j] + 0.5 * dt * k1[i, j]
        _rhs(tmp, k2, wpm, wcm, dp, d2, g12, g13, g23, gp31, gp32)
        for i in range(3):
            for j in range(3):
                tmp[i, j] = rho[i, j] + 0.5 * dt * k2[i, j]
        _rhs(tmp, k3, wpm, wcm, dp, d2, g12, g13, g23, gp31, gp32)
        for i in range(3):
            for j in range(3):
                tmp[i, j] = rho[i, j] + dt * k3[i, j]
        _rhs(tmp, k4, wp1, wc1, dp, d2, g12, g13, g23, gp31, gp32)

        for i in range(3):
            for j in range(3):
                rho[i, j] = rho[i, j] + (dt / 6.0) * (
                    k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j]
                )
        # re-Hermitize
        for i in range(3):
            rho[i, i] = complex(rho[i, i].real, 0.0)
            for j in range(i + 1, 3):
                avg = 0.5 * (rho[i, j] + np.conj(rho[j, i]))
                rho[i, j] = avg
                rho[j, i] = np.conj(avg)

        rho13[step + 1] = rho[0, 2]
        if (step + 1) % stride == 0:
            samples[s] = rho
            s += 1

    return samples, rho13, rho
