"""Domain types and unit conventions for the three-level lambda system.

Levels are |1>, |2> (ground hyperfine states) and |3> (optical excited
state), stored at array indices 0, 1, 2.  Density-matrix element rho_ij
therefore lives at ``rho[i-1, j-1]``.

Unit conventions, used everywhere in the package:

* user-facing frequencies and rates are ordinary frequencies in kHz;
* time is microseconds;
* internal equations of motion are angular: a value ``f`` in kHz enters
  the dynamics as ``2*pi*f*1e-3`` rad/us (``KHZ_TO_RAD_PER_US``).

With this convention a rate ``gamma12_khz`` makes the spin coherence
decay as ``exp(-2*pi*gamma12_khz*1e-3*t_us)``; a 500 us homogeneous
spin lifetime corresponds to gamma12 = 1/(2*pi*500e-6 s) ~ 0.318 kHz.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from .errors import InputStateError, SchemaError

#: kHz (ordinary frequency) -> rad/us (angular frequency).
KHZ_TO_RAD_PER_US = 2.0 * np.pi * 1e-3

#: Speed of light in mm/us, used only to report the (negligible) vacuum
#: transit time of a mm-scale medium.
C_MM_PER_US = 299_792.458

#: Channel names carried by every TimeSeries, in CSV column order.
CHANNEL_NAMES = (
    "re_rho12",
    "im_rho12",
    "re_rho13",
    "im_rho13",
    "pop1",
    "pop2",
    "pop3",
    "e_d_arb",
)


class Transition(Enum):
    """Optical transition a pulse drives."""

    PROBE = "probe"        # |1> -- |3>
    COUPLING = "coupling"  # |2> -- |3>


class EdgeShape(Enum):
    """Envelope edge of a pulse."""

    SQUARE = "square"
    RAISED_COSINE = "raised_cosine"


# ---------------------------------------------------------------------------
# density matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityMatrix:
    """Immutable 3x3 complex density matrix of one lambda-system member."""

    rho: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.rho, dtype=complex)
        if arr.shape != (3, 3):
            raise InputStateError(f"density matrix must be 3x3, got {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "rho", arr)

    @classmethod
    def ground(cls, level: int = 1) -> "DensityMatrix":
        """Pure state |level><level| with level in {1, 2, 3}."""
        if level not in (1, 2, 3):
            raise InputStateError(f"level must be 1, 2 or 3, got {level}")
        rho = np.zeros((3, 3), dtype=complex)
        rho[level - 1, level - 1] = 1.0
        return cls(rho)

    @classmethod
    def from_populations(cls, p1: float, p2: float, p3: float) -> "DensityMatrix":
        return cls(np.diag([p1, p2, p3]).astype(complex))

    @classmethod
    def spin_superposition(cls, rho12: complex) -> "DensityMatrix":
        """Equal-population |1>/|2> mixture carrying spin coherence rho12."""
        rho = np.diag([0.5, 0.5, 0.0]).astype(complex)
        rho[0, 1] = rho12
        rho[1, 0] = np.conj(rho12)
        return cls(rho)

    @property
    def rho12(self) -> complex:
        return complex(self.rho[0, 1])

    @property
    def rho13(self) -> complex:
        return complex(self.rho[0, 2])

    @property
    def rho23(self) -> complex:
        return complex(self.rho[1, 2])

    @property
    def populations(self) -> np.ndarray:
        return self.rho.diagonal().real.copy()

    def trace(self) -> complex:
        return complex(np.trace(self.rho))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_density_matrix: ok flag plus violation strings."""

    ok: bool
    violations: tuple[str, ...]


def validate_density_matrix(dm: DensityMatrix | np.ndarray, tol: float = 1e-9) -> ValidationReport:
    """Check Hermiticity, unit trace and population range of a state.

    Report-only: never raises for a bad state.  ``tol`` bounds the trace
    and population violations; Hermiticity is held to the tighter of
    ``tol`` and 1e-12.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    rho = dm.rho if isinstance(dm, DensityMatrix) else np.asarray(dm, dtype=complex)
    violations: list[str] = []

    herm_tol = min(tol, 1e-12)
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > herm_tol:
        violations.append(f"hermiticity violated: max |rho_ij - conj(rho_ji)| = {herm:.3e}")

    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        violations.append(f"trace violated: tr rho = {tr:.12g}")

    pops = rho.diagonal()
    for i, p in enumerate(pops):
        if abs(p.imag) > herm_tol:
            violations.append(f"population {i + 1} not real: {p:.3e}")
        if p.real < -tol or p.real > 1.0 + tol:
            violations.append(f"population {i + 1} out of [0, 1]: {p.real:.12g}")

    return ValidationReport(ok=not violations, violations=tuple(violations))


def require_valid(dm: DensityMatrix | np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Return the underlying array of a valid state or raise InputStateError."""
    report = validate_density_matrix(dm, tol)
    if not report.ok:
        raise InputStateError("; ".join(report.violations))
    return dm.rho if isinstance(dm, DensityMatrix) else np.asarray(dm, dtype=complex)


# ---------------------------------------------------------------------------
# pulses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pulse:
    """Time-gated Rabi-frequency envelope on one optical transition.

    ``detuning_khz`` is the probe detuning for probe-transition pulses
    and the coupling detuning for coupling-transition pulses.  The
    read-out drive of the conversion stage is a coupling-transition
    pulse like any other.
    """

    transition: Transition
    rabi_khz: float
    t_on_us: float
    t_off_us: float
    edge_shape: EdgeShape = EdgeShape.SQUARE
    edge_us: float = 0.0
    detuning_khz: float = 0.0

    def __post_init__(self):
        if self.t_off_us <= self.t_on_us:
            raise ValueError(f"t_off_us ({self.t_off_us}) must exceed t_on_us ({self.t_on_us})")
        if self.rabi_khz < 0:
            raise ValueError(f"rabi_khz must be >= 0, got {self.rabi_khz}")
        if self.edge_shape is EdgeShape.RAISED_COSINE:
            if self.edge_us <= 0:
                raise ValueError("raised_cosine pulses need edge_us > 0")
            if self.edge_us > (self.t_off_us - self.t_on_us) / 2:
                raise ValueError("edge_us must not exceed half the pulse window")


def pulse_envelope(p: Pulse, t_us: float | np.ndarray) -> float | np.ndarray:
    """Instantaneous Rabi value of a pulse at time t (kHz).

    Zero outside [t_on, t_off]; equal to rabi_khz on the plateau; a
    raised-cosine pulse ramps as 0.5*(1 - cos(pi*s/edge)) over each edge.
    """
    t = np.asarray(t_us, dtype=float)
    out = np.zeros_like(t)
    inside = (t >= p.t_on_us) & (t <= p.t_off_us)
    if p.edge_shape is EdgeShape.SQUARE:
        out[inside] = p.rabi_khz
    else:
        rise = inside & (t < p.t_on_us + p.edge_us)
        fall = inside & (t > p.t_off_us - p.edge_us)
        plateau = inside & ~rise & ~fall
        out[plateau] = p.rabi_khz
        s = t[rise] - p.t_on_us
        out[rise] = 0.5 * (1.0 - np.cos(np.pi * s / p.edge_us)) * p.rabi_khz
        s = p.t_off_us - t[fall]
        out[fall] = 0.5 * (1.0 - np.cos(np.pi * s / p.edge_us)) * p.rabi_khz
    if np.isscalar(t_us):
        return float(out)
    return out


@dataclass(frozen=True)
class PulseSequence:
    """Ordered pulses plus the total simulated duration."""

    pulses: tuple[Pulse, ...]
    total_duration_us: float

    def __init__(self, pulses: Iterable[Pulse], total_duration_us: float):
        pulses = tuple(pulses)
        latest = max((p.t_off_us for p in pulses), default=0.0)
        if total_duration_us < latest:
            raise ValueError(
                f"total_duration_us ({total_duration_us}) must cover the last pulse end ({latest})"
            )
        object.__setattr__(self, "pulses", pulses)
        object.__setattr__(self, "total_duration_us", float(total_duration_us))

    def on_transition(self, transition: Transition) -> tuple[Pulse, ...]:
        return tuple(p for p in self.pulses if p.transition is transition)

    def envelope(self, transition: Transition, t_us: np.ndarray) -> np.ndarray:
        """Summed envelope (kHz) of all pulses on one transition."""
        total = np.zeros_like(np.asarray(t_us, dtype=float))
        for p in self.on_transition(transition):
            total += pulse_envelope(p, t_us)
        return total

    def detuning(self, transition: Transition) -> float:
        """Common detuning (kHz) of the pulses on one transition.

        All pulses of a transition must agree; the simulator keeps one
        rotating frame per transition.
        """
        pulses = self.on_transition(transition)
        if not pulses:
            return 0.0
        values = {p.detuning_khz for p in pulses}
        if len(values) > 1:
            raise ValueError(
                f"pulses on the {transition.value} transition carry different detunings: {sorted(values)}"
            )
        return pulses[0].detuning_khz

    def max_rate_khz(self) -> tuple[float, str]:
        """Largest Rabi value or detuning in the sequence, with its name."""
        best, name = 0.0, "none"
        for i, p in enumerate(self.pulses):
            if p.rabi_khz > best:
                best, name = p.rabi_khz, f"pulse {i} ({p.transition.value}) rabi_khz"
            if abs(p.detuning_khz) > best:
                best, name = abs(p.detuning_khz), f"pulse {i} ({p.transition.value}) detuning_khz"
        return best, name


# ---------------------------------------------------------------------------
# medium
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MediumParams:
    """Decoherence rates, inhomogeneous width and medium geometry.

    gamma12/gamma13/gamma23 are pure dephasing rates of the respective
    coherences; gamma31/gamma32 are population decay rates out of |3>
    into |1> and |2> (closed relaxation).  Population decay additionally
    dephases the optical coherences at (gamma31 + gamma32)/2, as in the
    standard master equation.
    """

    gamma12_khz: float = 0.0
    gamma13_khz: float = 1.0
    gamma23_khz: float = 1.0
    gamma31_khz: float = 0.0
    gamma32_khz: float = 0.0
    delta_s_khz: float = 30.0
    length_mm: float = 3.0
    coupling_const: float = 4.2
    n_density_rel: float = 1.0

    def __post_init__(self):
        for name in ("gamma12_khz", "gamma13_khz", "gamma23_khz",
                     "gamma31_khz", "gamma32_khz", "delta_s_khz"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.length_mm <= 0:
            raise ValueError("length_mm must be > 0")

    def max_rate_khz(self) -> tuple[float, str]:
        best, name = 0.0, "none"
        for attr in ("gamma12_khz", "gamma13_khz", "gamma23_khz",
                     "gamma31_khz", "gamma32_khz"):
            v = getattr(self, attr)
            if v > best:
                best, name = v, attr
        return best, name


# ---------------------------------------------------------------------------
# sampled observables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TimeSeries:
    """Named real channels sampled on a strictly increasing time grid."""

    t_us: np.ndarray
    channels: dict[str, np.ndarray]

    def __post_init__(self):
        t = np.asarray(self.t_us, dtype=float)
        if t.ndim != 1 or len(t) == 0:
            raise ValueError("t_us must be a non-empty 1-d grid")
        if len(t) > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("t_us must be strictly increasing")
        chans = {}
        for name, values in self.channels.items():
            v = np.asarray(values, dtype=float)
            if v.shape != t.shape:
                raise ValueError(f"channel {name!r} length {v.shape} != grid {t.shape}")
            v = v.copy()
            v.setflags(write=False)
            chans[name] = v
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "t_us", t)
        object.__setattr__(self, "channels", chans)

    def channel(self, name: str) -> np.ndarray:
        try:
            return self.channels[name]
        except KeyError:
            raise SchemaError(f"time series has no channel {name!r}; "
                              f"present: {sorted(self.channels)}") from None


@dataclass(frozen=True)
class SpectralMap:
    """Real observable over (two-photon detuning, time)."""

    delta2_khz: np.ndarray
    t_us: np.ndarray
    values: np.ndarray  # shape (len(delta2), len(t))

    def __post_init__(self):
        d = np.asarray(self.delta2_khz, dtype=float)
        t = np.asarray(self.t_us, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if v.shape != (len(d), len(t)):
            raise ValueError(f"values shape {v.shape} inconsistent with grids ({len(d)}, {len(t)})")
        for arr in (d, t, v):
            arr.setflags(write=False)
        object.__setattr__(self, "delta2_khz", d)
        object.__setattr__(self, "t_us", t)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class WaveVector:
    """3-d wavevector in rad/m."""

    kx: float
    ky: float
    kz: float

    def __post_init__(self):
        for name in ("kx", "ky", "kz"):
            c = float(getattr(self, name))
            if not np.isfinite(c):
                raise ValueError("wavevector components must be finite")
            object.__setattr__(self, name, c)

    @classmethod
    def from_angle(cls, k_mag: float, theta_rad: float) -> "WaveVector":
        """In-plane vector at angle theta from the z axis."""
        return cls(k_mag * np.sin(theta_rad), 0.0, k_mag * np.cos(theta_rad))

    def __add__(self, other: "WaveVector") -> "WaveVector":
        return WaveVector(self.kx + other.kx, self.ky + other.ky, self.kz + other.kz)

    def __sub__(self, other: "WaveVector") -> "WaveVector":
        return WaveVector(self.kx - other.kx, self.ky - other.ky, self.kz - other.kz)

    def norm(self) -> float:
        return float(np.sqrt(self.kx**2 + self.ky**2 + self.kz**2))


def series_from_rho_samples(t_us: np.ndarray, samples: np.ndarray) -> TimeSeries:
    """Build the standard channel set from sampled 3x3 density matrices.

    e_d_arb is the emitted-field amplitude read from the probe-transition
    coherence; its sign convention is fixed so that the retrieved field
    equals the negative time derivative of the stored spin coherence
    (see fwm.verify_conversion_law).
    """
    channels = {
        "re_rho12": samples[:, 0, 1].real,
        "im_rho12": samples[:, 0, 1].imag,
        "re_rho13": samples[:, 0, 2].real,
        "im_rho13": samples[:, 0, 2].imag,
        "pop1": samples[:, 0, 0].real,
        "pop2": samples[:, 1, 1].real,
        "pop3": samples[:, 2, 2].real,
        "e_d_arb": -samples[:, 0, 2].imag,
    }
    return TimeSeries(t_us=t_us, channels=channels)
