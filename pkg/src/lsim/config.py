"""Scenario configuration: documented defaults, file parsing, overrides.

Config files are line-oriented ``key = value`` UTF-8 text with ``#``
comments.  Every key has a documented default; unknown keys are
rejected with the offending line number.  Precedence is defaults, then
file, then command-line ``--set`` overrides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

#: key -> (type, default, documentation).  Unit suffixes are part of the
#: key name; unsuffixed keys are dimensionless by design.
KEY_TABLE: dict[str, tuple[type, object, str]] = {
    # numerics
    "dt_us": (float, 0.01, "integration step"),
    "output_stride": (int, 1, "record channels every this many steps"),
    # medium
    "gamma12_khz": (float, 0.0, "spin dephasing rate; 1/(2*pi*T2_spin)"),
    "gamma13_khz": (float, 1.0, "optical dephasing rate, |1>-|3>"),
    "gamma23_khz": (float, 1.0, "optical dephasing rate, |2>-|3>"),
    "gamma31_khz": (float, 0.0, "population decay |3> -> |1>"),
    "gamma32_khz": (float, 0.0, "population decay |3> -> |2>"),
    "delta_s_khz": (float, 30.0, "spin inhomogeneous FWHM"),
    "length_mm": (float, 3.0, "medium length"),
    "coupling_const": (float, 4.2, "atom-field coupling per unit density, rad/(us mm)"),
    "n_density_rel": (float, 1.0, "relative atom density scaling the coupling"),
    # preparation pulses
    "probe_rabi_khz": (float, 50.0, "probe Rabi amplitude during preparation"),
    "coupling_rabi_khz": (float, 100.0, "coupling Rabi amplitude"),
    "probe_detuning_khz": (float, 0.0, "probe one-photon detuning"),
    "coupling_detuning_khz": (float, 0.0, "coupling one-photon detuning"),
    "prep_start_us": (float, 0.0, "preparation pulse turn-on"),
    "prep_len_us": (float, 10.0, "preparation pulse length"),
    "edge_shape": (str, "square", "pulse edge: square | raised_cosine"),
    "pulse_edge_us": (float, 1.0, "edge length for raised_cosine pulses"),
    # read-out
    "readout_rabi_khz": (float, 100.0, "read-out Rabi amplitude"),
    "readout_start_us": (float, 35.0, "read-out turn-on time"),
    "readout_len_us": (float, 10.0, "read-out pulse length"),
    "tail_us": (float, 5.0, "recorded time after the read-out pulse"),
    # fig2 detuning map
    "map_span_khz": (float, 50.0, "two-photon map covers +- this detuning"),
    "map_points": (int, 101, "two-photon map grid points"),
    "map_stride": (int, 10, "time downsampling of the map"),
    # fig3 sweep
    "sweep_start_khz": (float, 20.0, "first read-out amplitude of the sweep"),
    "sweep_step_khz": (float, 20.0, "read-out amplitude step"),
    "sweep_count": (int, 7, "number of sweep points"),
    # ensemble / fid
    "n_members": (int, 201, "ensemble members"),
    "distribution": (str, "lorentzian", "spin profile: lorentzian | gaussian"),
    "sampling": (str, "quantile", "member sampling: quantile | monte_carlo"),
    "seed": (int, 12345, "monte_carlo seed"),
    "rho12_init": (float, 0.5, "initial spin coherence of the fid scenario"),
    "fid_duration_us": (float, 40.0, "fid observation window"),
    # eit spectrum
    "spectrum_span_khz": (float, 150.0, "susceptibility grid covers +- this"),
    "spectrum_points": (int, 601, "susceptibility grid points (odd keeps 0 on grid)"),
    # slow light / routing
    "probe_len_us": (float, 8.0, "probe pulse length for propagation"),
    "probe_start_us": (float, 2.0, "probe pulse turn-on for propagation"),
    "t_total_us": (float, 60.0, "propagation record length"),
    "n_z": (int, 64, "slab count of the z march"),
    "delay_method": (str, "peak", "delay extraction: peak | centroid"),
    # detuning sweep
    "sweep_span_khz": (float, 40.0, "detuning sweep covers +- this"),
    "sweep_points": (int, 21, "detuning sweep grid points"),
    "probe_low_khz": (float, 10.0, "low probe power of the detuning sweep"),
    "probe_high_khz": (float, 80.0, "high probe power of the detuning sweep"),
    # phase matching
    "theta_p_mrad": (float, 0.0, "probe beam angle"),
    "theta_c_mrad": (float, 35.0, "coupling beam angle"),
    "theta_a_mrad": (float, 70.0, "read-out beam angle"),
    "k_mag_rad_per_m": (float, 1.0368e7, "wavevector magnitude of all beams"),
    "omega_d_over_c_rad_per_m": (float, 1.0368e7, "target shell of the generated beam"),
}

_ENUM_KEYS = {
    "edge_shape": ("square", "raised_cosine"),
    "distribution": ("lorentzian", "gaussian"),
    "sampling": ("quantile", "monte_carlo"),
    "delay_method": ("peak", "centroid"),
}

#: Scenario-specific defaults layered over the base table.
SCENARIO_DEFAULTS: dict[str, dict[str, object]] = {
    # 60 kHz over 10 us sweeps just over half a coherence cycle: the
    # stored coherence visibly drains into emission without re-growing
    "fig2": {"readout_rabi_khz": 60.0},
    "fig3": {"readout_len_us": 20.0},
    "fid": {"n_members": 401, "dt_us": 0.02},
    "eit-spectrum": {"probe_rabi_khz": 10.0},
    "slowlight": {
        "probe_rabi_khz": 20.0,
        "coupling_rabi_khz": 200.0,
        "edge_shape": "raised_cosine",
        "pulse_edge_us": 4.0,
        "n_z": 256,
        "dt_us": 0.02,
    },
    "routing": {
        "probe_rabi_khz": 20.0,
        "coupling_rabi_khz": 200.0,
        "edge_shape": "raised_cosine",
        "pulse_edge_us": 4.0,
        "n_z": 256,
        "dt_us": 0.02,
        "readout_rabi_khz": 240.0,
        "readout_start_us": 20.0,
        "readout_len_us": 10.0,
    },
    "detuning-sweep": {"readout_len_us": 10.0},
    "phase-match": {},
}

SCENARIO_NAMES = tuple(SCENARIO_DEFAULTS)

_UNIT_SUFFIXES = ("_khz", "_us", "_mm", "_mrad", "_rad_per_m")


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved configuration of one scenario run."""

    scenario: str
    values: dict[str, object] = field(default_factory=dict)

    def __getitem__(self, key: str):
        return self.values[key]

    def resolved_text(self) -> str:
        lines = [f"scenario = {self.scenario}"]
        for key in sorted(self.values):
            lines.append(f"{key} = {_format_value(self.values[key])}")
        return "\n".join(lines) + "\n"


def _format_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_value(key: str, raw: str, where: str):
    if key not in KEY_TABLE:
        hint = ""
        for suffix in _UNIT_SUFFIXES:
            if key + suffix in KEY_TABLE:
                hint = f" (missing unit suffix? did you mean {key + suffix!r})"
                break
        raise ConfigError(f"{where}: unknown key {key!r}{hint}")
    typ = KEY_TABLE[key][0]
    try:
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse value {raw!r} for key {key!r} "
                          f"as {typ.__name__}") from None
    value = raw.strip()
    allowed = _ENUM_KEYS.get(key)
    if allowed and value not in allowed:
        raise ConfigError(f"{where}: {key!r} must be one of {allowed}, got {value!r}")
    return value


def _parse_file(path: Path) -> dict[str, object]:
    values: dict[str, object] = {}
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key == "scenario":
            continue  # informational echo; the command line names the scenario
        values[key] = _parse_value(key, raw, f"{path}:{lineno}")
    return values


def load_config(scenario: str, path: str | Path | None = None,
                overrides: list[str] | tuple[str, ...] = ()) -> ScenarioConfig:
    """Resolve defaults, then file, then overrides, in that order."""
    if scenario not in SCENARIO_DEFAULTS:
        raise ConfigError(
            f"unknown scenario {scenario!r}; valid: {', '.join(SCENARIO_NAMES)}"
        )
    values = {key: default for key, (_, default, _) in KEY_TABLE.items()}
    values.update(SCENARIO_DEFAULTS[scenario])
    if path is not None:
        values.update(_parse_file(Path(path)))
    for i, item in enumerate(overrides):
        if "=" not in item:
            raise ConfigError(f"--set #{i + 1}: expected key=value, got {item!r}")
        key, raw = (part.strip() for part in item.split("=", 1))
        values[key] = _parse_value(key, raw, f"--set #{i + 1}")
    return ScenarioConfig(scenario=scenario, values=values)


def document_defaults() -> str:
    """Human-readable key table for the README and --help epilogue."""
    width = max(len(k) for k in KEY_TABLE)
    lines = []
    for key, (typ, default, doc) in KEY_TABLE.items():
        lines.append(f"{key.ljust(width)}  {typ.__name__:5s}  default {default!r:<14}  {doc}")
    lines.append("")
    lines.append("scenario-specific defaults (override the table above):")
    for scenario, overlay in SCENARIO_DEFAULTS.items():
        if overlay:
            pairs = ", ".join(f"{k}={v}" for k, v in overlay.items())
            lines.append(f"  {scenario}: {pairs}")
    return "\n".join(lines)
