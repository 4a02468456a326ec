"""1-d slab propagation of the probe pulse through the prepared medium.

The march runs in the retarded (co-moving) frame, so the vacuum transit
is removed and the extracted delay is the pure group delay.  Scheme:
first-order upwind in z; within each slab the local atoms integrate the
full master equation (RK4, same kernel as bloch.evolve) driven by the
local complex probe envelope, then the field advances one slab via

    d(omega_p)/dz = -i * eta * rho13,       eta = coupling_const * n_density_rel.

The sign pairs with the simulator's phase convention (absorption has
Im(rho13) < 0), so a passive medium attenuates.  The coupling field is
undepleted and z-uniform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import KHZ_TO_RAD_PER_US, DensityMatrix, MediumParams, validate_density_matrix
from .errors import ConfigError, PulseDetectionError, RegimeError
from .eit import WEAK_PROBE_RATIO

#: A per-slab field update larger than this fraction of the field means
#: the z step is too coarse for the explicit march.
SLAB_UPDATE_LIMIT = 0.5


@dataclass(frozen=True)
class PropagationGrid:
    """Uniform slab discretization of the medium."""

    n_z: int = 64
    length_mm: float = 3.0
    dt_us: float = 0.01
    retarded_frame: bool = True

    def __post_init__(self):
        if self.n_z < 2:
            raise ConfigError("n_z must be >= 2")
        if self.length_mm <= 0:
            raise ConfigError("length_mm must be > 0")
        if self.dt_us <= 0:
            raise ConfigError("dt_us must be > 0")
        if not self.retarded_frame:
            raise ConfigError("only the retarded frame is implemented")


@dataclass(frozen=True)
class PropagationResult:
    """Exit envelope plus per-slab energy record."""

    t_us: np.ndarray
    input_env_khz: np.ndarray   # complex envelope at the entrance
    output_env_khz: np.ndarray  # complex envelope at the exit
    slab_energy: np.ndarray     # pulse energy at entrance and after each slab
    eta: float                  # angular coupling, rad/(us mm)


def _pulse_energy(env: np.ndarray, dt: float) -> float:
    return float(np.sum(np.abs(env) ** 2) * dt)


def propagate_pulse(t_us: np.ndarray, probe_env_khz: np.ndarray,
                    omega_c_khz: float, params: MediumParams,
                    grid: PropagationGrid,
                    coupling_env_khz: np.ndarray | None = None) -> PropagationResult:
    """March the probe envelope through n_z slabs of freshly prepared atoms.

    ``coupling_env_khz`` optionally replaces the constant coupling drive
    with a time-dependent (still z-uniform, undepleted) envelope, which
    the routing composite uses to add the read-out drive.
    """
    t = np.asarray(t_us, dtype=float)
    env = np.asarray(probe_env_khz, dtype=complex)
    if t.ndim != 1 or t.shape != env.shape or len(t) < 3:
        raise ConfigError("t_us and probe_env_khz must be matching 1-d arrays")
    dt = t[1] - t[0]
    if not np.allclose(np.diff(t), dt, rtol=1e-9, atol=0.0):
        raise ConfigError("time grid must be uniform")
    if not np.isclose(dt, grid.dt_us, rtol=1e-9):
        raise ConfigError(f"grid.dt_us = {grid.dt_us} does not match the envelope spacing {dt}")

    peak = float(np.max(np.abs(env)))
    if peak > WEAK_PROBE_RATIO * omega_c_khz:
        raise RegimeError(
            f"weak-probe regime violated: peak probe {peak:.4g} kHz exceeds "
            f"{WEAK_PROBE_RATIO} * omega_c = {WEAK_PROBE_RATIO * omega_c_khz:.4g} kHz"
        )

    k = KHZ_TO_RAD_PER_US
    coupling_peak = omega_c_khz
    if coupling_env_khz is not None:
        coupling_peak = max(coupling_peak, float(np.max(np.abs(coupling_env_khz))))
    fastest = max(coupling_peak, peak, params.max_rate_khz()[0])
    if dt * fastest * k >= 0.1:
        raise ConfigError(
            f"dt_us = {dt} violates the step-size guard for a {fastest} kHz drive"
        )

    n_steps = len(t) - 1
    if coupling_env_khz is None:
        wc_stages = np.full((n_steps, 3), omega_c_khz * k, dtype=complex)
    else:
        wc = np.asarray(coupling_env_khz, dtype=complex) * k
        if wc.shape != t.shape:
            raise ConfigError("coupling_env_khz must match the time grid")
        wc_stages = np.empty((n_steps, 3), dtype=complex)
        wc_stages[:, 0] = wc[:-1]
        wc_stages[:, 1] = 0.5 * (wc[:-1] + wc[1:])
        wc_stages[:, 2] = wc[1:]

    eta = params.coupling_const * params.n_density_rel
    dz = grid.length_mm / grid.n_z
    rho0 = np.zeros((3, 3), dtype=complex)
    rho0[0, 0] = 1.0

    field = env * k  # angular, rad/us
    energies = np.empty(grid.n_z + 1)
    energies[0] = _pulse_energy(field, dt)

    g12 = params.gamma12_khz * k
    g13 = params.gamma13_khz * k
    g23 = params.gamma23_khz * k
    gp31 = params.gamma31_khz * k
    gp32 = params.gamma32_khz * k

    wp_stages = np.empty((n_steps, 3), dtype=complex)
    for j in range(grid.n_z):
        wp_stages[:, 0] = field[:-1]
        wp_stages[:, 1] = 0.5 * (field[:-1] + field[1:])
        wp_stages[:, 2] = field[1:]
        _, rho13, rho_final = _kernels.evolve_kernel(
            rho0, wp_stages, wc_stages, 0.0, 0.0,
            g12, g13, g23, gp31, gp32, dt, n_steps,
        )
        report = validate_density_matrix(DensityMatrix(rho_final))
        if not report.ok:
            raise ConfigError(f"slab {j} atomic state invalid: {report.violations[0]}")

        update = -1j * eta * dz * rho13
        max_update = float(np.max(np.abs(update)))
        max_field = float(np.max(np.abs(field)))
        if max_field > 0 and max_update > SLAB_UPDATE_LIMIT * max_field:
            raise ConfigError(
                f"slab update {max_update:.3g} exceeds {SLAB_UPDATE_LIMIT} of the field "
                f"{max_field:.3g}; increase n_z (currently {grid.n_z})"
            )
        field = field + update
        energies[j + 1] = _pulse_energy(field, dt)

    return PropagationResult(
        t_us=t,
        input_env_khz=env,
        output_env_khz=field / k,
        slab_energy=energies,
        eta=eta,
    )


def extract_delay(t_us: np.ndarray, x_in: np.ndarray, x_out: np.ndarray,
                  method: str = "peak") -> float:
    """Delay (us) between the dominant pulses of two envelope series.

    ``peak`` refines the sample maxima with parabolic interpolation;
    ``centroid`` differences the first moments of |x|^2.
    """
    t = np.asarray(t_us, dtype=float)
    a = np.abs(np.asarray(x_in))
    b = np.abs(np.asarray(x_out))
    for name, x in (("input", a), ("output", b)):
        floor = np.percentile(x, 10)
        if x.max() <= 0 or x.max() < 10.0 * floor:
            raise PulseDetectionError(
                f"no dominant pulse in the {name} series "
                f"(max {x.max():.3g} vs floor {floor:.3g})"
            )
    if method == "peak":
        return _peak_time(t, b) - _peak_time(t, a)
    if method == "centroid":
        return _centroid_time(t, b) - _centroid_time(t, a)
    raise ConfigError(f"unknown delay-extraction method {method!r}")


def _peak_time(t: np.ndarray, x: np.ndarray) -> float:
    i = int(np.argmax(x))
    if i == 0 or i == len(x) - 1:
        return float(t[i])
    denom = x[i - 1] - 2.0 * x[i] + x[i + 1]
    if denom == 0:
        return float(t[i])
    shift = 0.5 * (x[i - 1] - x[i + 1]) / denom
    return float(t[i] + shift * (t[1] - t[0]))


def _centroid_time(t: np.ndarray, x: np.ndarray) -> float:
    w = x.astype(float) ** 2
    return float(np.sum(t * w) / np.sum(w))
