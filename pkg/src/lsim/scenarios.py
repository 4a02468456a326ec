"""Scenario orchestration: maps named runs onto the simulation modules
and emits CSV/SVG/report files.

Scenarios:

* ``fig2``            simultaneous probe+coupling preparation, free
                      evolution, read-out; time traces plus two-photon
                      detuning maps of the optical and spin coherence.
* ``fig3``            preparation, then a read-out amplitude sweep with
                      conversion-law fits and the oscillation onset.
* ``fid``             instantaneous spin preparation, ensemble decay,
                      1/e time estimate.
* ``eit-spectrum``    susceptibility over a probe-detuning grid plus the
                      dispersive group-delay prediction.
* ``slowlight``       probe pulse transport through the medium; extracted
                      delay overlaid with the dispersion prediction.
* ``routing``         transport with a read-out drive added mid-flight:
                      slow-light suppression and the converted burst.
* ``detuning-sweep``  peak converted signal versus two-photon detuning
                      at two probe powers.
* ``phase-match``     wavevector arithmetic for the configured beam
                      angles.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import bloch, eit, ensemble, fwm, propagation
from .config import ScenarioConfig
from .core import (
    DensityMatrix,
    EdgeShape,
    MediumParams,
    Pulse,
    PulseSequence,
    TimeSeries,
    Transition,
    WaveVector,
    pulse_envelope,
)
from .errors import ConfigError
from .output import render_svg, write_csv, write_table_csv, write_text


def medium_from_config(cfg: ScenarioConfig) -> MediumParams:
    return MediumParams(
        gamma12_khz=cfg["gamma12_khz"],
        gamma13_khz=cfg["gamma13_khz"],
        gamma23_khz=cfg["gamma23_khz"],
        gamma31_khz=cfg["gamma31_khz"],
        gamma32_khz=cfg["gamma32_khz"],
        delta_s_khz=cfg["delta_s_khz"],
        length_mm=cfg["length_mm"],
        coupling_const=cfg["coupling_const"],
        n_density_rel=cfg["n_density_rel"],
    )


def _edge(cfg: ScenarioConfig) -> tuple[EdgeShape, float]:
    shape = EdgeShape(cfg["edge_shape"])
    edge = cfg["pulse_edge_us"] if shape is EdgeShape.RAISED_COSINE else 0.0
    return shape, edge


def _prep_pulses(cfg: ScenarioConfig) -> list[Pulse]:
    shape, edge = _edge(cfg)
    t0 = cfg["prep_start_us"]
    t1 = t0 + cfg["prep_len_us"]
    return [
        Pulse(Transition.PROBE, cfg["probe_rabi_khz"], t0, t1, shape, edge,
              cfg["probe_detuning_khz"]),
        Pulse(Transition.COUPLING, cfg["coupling_rabi_khz"], t0, t1, shape, edge,
              cfg["coupling_detuning_khz"]),
    ]


def _readout_pulse(cfg: ScenarioConfig) -> Pulse:
    t0 = cfg["readout_start_us"]
    return Pulse(Transition.COUPLING, cfg["readout_rabi_khz"], t0,
                 t0 + cfg["readout_len_us"])


def _ensemble_spec(cfg: ScenarioConfig) -> ensemble.EnsembleSpec:
    return ensemble.EnsembleSpec(
        distribution=ensemble.Distribution(cfg["distribution"]),
        fwhm_khz=cfg["delta_s_khz"],
        n_members=cfg["n_members"],
        sampling=ensemble.Sampling(cfg["sampling"]),
        seed=cfg["seed"],
    )


# ---------------------------------------------------------------------------
# individual scenarios
# ---------------------------------------------------------------------------


def run_fig2(cfg: ScenarioConfig, out: Path, svg: bool) -> list[Path]:
    params = medium_from_config(cfg)
    readout = _readout_pulse(cfg)
    seq = PulseSequence(_prep_pulses(cfg) + [readout],
                        total_duration_us=readout.t_off_us + cfg["tail_us"])
    rho0 = DensityMatrix.ground(1)
    ts, _ = bloch.evolve(rho0, seq, params, dt_us=cfg["dt_us"],
                         output_stride=cfg["output_stride"])
    files = [write_csv(ts, out / "fig2_timeseries.csv")]

    grid = np.linspace(-cfg["map_span_khz"], cfg["map_span_khz"], cfg["map_points"])
    maps = {}
    for channel in ("im_rho13", "re_rho12"):
        sm = ensemble.two_photon_map(rho0, seq, params, grid, dt_us=cfg["dt_us"],
                                     channel=channel, output_stride=cfg["map_stride"])
        maps[channel] = sm
        files.append(write_csv(sm, out / f"fig2_map_{channel}.csv"))

    if svg:
        files.append(render_svg(ts, out / "fig2_timeseries.svg",
                                {"title": "coherence traces",
                                 "channels": ["im_rho13", "re_rho12"]}))
        for channel, sm in maps.items():
            files.append(render_svg(sm, out / f"fig2_map_{channel}.svg",
                                    {"title": f"{channel} over two-photon detuning"}))
    return files


def _prepare_stored_state(cfg: ScenarioConfig, params: MediumParams) -> DensityMatrix:
    """Evolve through the preparation pulses up to the read-out start."""
    seq = PulseSequence(_prep_pulses(cfg), total_duration_us=cfg["readout_start_us"])
    _, rho = bloch.evolve(DensityMatrix.ground(1), seq, params, dt_us=cfg["dt_us"])
    return rho


def run_fig3(cfg: ScenarioConfig, out: Path, svg: bool) -> list[Path]:
    params = medium_from_config(cfg)
    rho_start = _prepare_stored_state(cfg, params)
    template = _readout_pulse(cfg)
    values = [cfg["sweep_start_khz"] + k * cfg["sweep_step_khz"]
              for k in range(cfg["sweep_count"])]
    results = fwm.sweep_readout(rho_start, values, template, params, dt_us=cfg["dt_us"])

    files = []
    rows = []
    onset = None
    for res in results:
        label = f"{res.omega_a_khz:g}khz"
        files.append(write_csv(res.series, out / f"fig3_readout_{label}.csv"))
        fit = res.conversion_fit
        re12 = res.series.channel("re_rho12")
        im13 = res.series.channel("im_rho13")
        dt = res.series.t_us[1] - res.series.t_us[0]
        rows.append([res.omega_a_khz, fit.scale, fit.pearson_r, fit.max_residual,
                     str(res.oscillation_detected).lower(),
                     float(abs(re12[0])), float(abs(re12[-1])),
                     float(np.trapezoid(im13, dx=dt))])
        if onset is None and res.oscillation_detected:
            onset = res.omega_a_khz
    files.append(write_table_csv(
        out / "fig3_conversion_fits.csv",
        ["omega_a_khz", "scale", "pearson_r", "max_residual",
         "oscillation_detected", "abs_re_rho12_start", "abs_re_rho12_end",
         "integral_im_rho13"],
        rows))
    onset_text = ("read-out Rabi-oscillation onset\n"
                  f"sweep (kHz): {', '.join(str(v) for v in values)}\n"
                  f"first oscillating amplitude: "
                  f"{'none' if onset is None else f'{onset} kHz'}\n")
    files.append(write_text(out / "fig3_onset.txt", onset_text))

    if svg:
        for res in results:
            label = f"{res.omega_a_khz:g}khz"
            files.append(render_svg(
                res.series, out / f"fig3_readout_{label}.svg",
                {"title": f"read-out at {res.omega_a_khz:g} kHz",
                 "channels": ["re_rho12", "im_rho13", "e_d_arb"]}))
    return files


def run_fid(cfg: ScenarioConfig, out: Path, svg: bool) -> list[Path]:
    params = medium_from_config(cfg)
    spec = _ensemble_spec(cfg)
    rho0 = DensityMatrix.spin_superposition(cfg["rho12_init"])
    seq = PulseSequence([], total_duration_us=cfg["fid_duration_us"])
    ts = ensemble.ensemble_evolve(rho0, seq, params, spec, dt_us=cfg["dt_us"],
                                  output_stride=cfg["output_stride"])
    t2_star = ensemble.fid_decay_time(ts, "re_rho12", t_start_us=0.0)

    files = [write_csv(ts, out / "fid_timeseries.csv")]
    analytic = (1.0 / (np.pi * params.delta_s_khz * 1e-3)
                if params.delta_s_khz > 0 else float("inf"))
    report = (
        "free-induction decay of the averaged spin coherence\n"
        f"distribution: {spec.distribution.value}, fwhm = {spec.fwhm_khz} kHz, "
        f"members = {spec.n_members} ({spec.sampling.value})\n"
        f"measured 1/e time: {t2_star:.4f} us\n"
        f"lorentzian 1/(pi*fwhm) reference: {analytic:.4f} us\n"
    )
    files.append(write_text(out / "fid_report.txt", report))
    if svg:
        files.append(render_svg(ts, out / "fid_timeseries.svg",
                                {"title": "ensemble free-induction decay",
                                 "channels": ["re_rho12", "im_rho12"]}))
    return files


def run_eit_spectrum(cfg: ScenarioConfig, out: Path, svg: bool) -> list[Path]:
    params = medium_from_config(cfg)
    n = cfg["spectrum_points"]
    if n < 5 or n % 2 == 0:
        raise ConfigError("spectrum_points must be odd and >= 5 to keep 0 on the grid")
    grid = np.linspace(-cfg["spectrum_span_khz"], cfg["spectrum_span_khz"], n)
    spectrum = eit.susceptibility_spectrum(params, grid, cfg["probe_rabi_khz"],
                                           cfg["coupling_rabi_khz"],
                                           cfg["coupling_detuning_khz"])
    gd = eit.group_delay(spectrum, params)

    lines = ["delta_p_khz,chi_re,chi_im"]
    for d, re, im in zip(spectrum.delta_p_khz, spectrum.chi_re, spectrum.chi_im):
        lines.append(f"{d!r},{re!r},{im!r}")
    files = [write_text(out / "eit_spectrum.csv", "\n".join(lines) + "\n")]

    # coupling-power scaling of the delay, reported rather than asserted
    fine = np.linspace(-5.0, 5.0, 11)
    sweep_oc = [0.8, 1.0, 1.2, 1.4]
    delays = []
    for factor in sweep_oc:
        oc = factor * cfg["coupling_rabi_khz"]
        sp = eit.susceptibility_spectrum(params, fine, cfg["probe_rabi_khz"], oc,
                                         cfg["coupling_detuning_khz"])
        delays.append(eit.group_delay(sp, params).delay_us)
    exponent = float(np.polyfit(np.log(sweep_oc), np.log(delays), 1)[0])

    report = (
        "dispersive group delay at line center\n"
        f"dRe(chi)/d(delta): {gd.slope!r}\n"
        f"group delay: {gd.delay_us:.6g} us\n"
        f"vacuum transit: {gd.vacuum_transit_us:.6g} us\n"
        f"v_g / c: {gd.v_g_rel:.6g}\n"
        f"fitted delay exponent vs coupling amplitude: {exponent:.4f} "
        "(quadratic window scaling gives -2)\n"
    )
    files.append(write_text(out / "eit_group_delay.txt", report))
    if svg:
        ts = TimeSeries(t_us=spectrum.delta_p_khz - spectrum.delta_p_khz[0],
                        channels={"chi_re": spectrum.chi_re, "chi_im": spectrum.chi_im})
        files.append(render_svg(ts, out / "eit_spectrum.svg",
                                {"title": "susceptibility (x axis offset by span)",
                                 "x_label": "delta_p + span (kHz)"}))
    return files


def _probe_envelope(cfg: ScenarioConfig) -> tuple[np.ndarray, np.ndarray, Pulse]:
    shape, edge = _edge(cfg)
    pulse = Pulse(Transition.PROBE, cfg["probe_rabi_khz"], cfg["probe_start_us"],
                  cfg["probe_start_us"] + cfg["probe_len_us"], shape, edge)
    n = int(round(cfg["t_total_us"] / cfg["dt_us"]))
    t = np.arange(n + 1) * cfg["dt_us"]
    return t, pulse_envelope(pulse, t).astype(complex), pulse


def run_slowlight(cfg: ScenarioConfig, out: Path, svg: bool) -> list[Path]:
    params = medium_from_config(cfg)
    t, env, _ = _probe_envelope(cfg)
    grid = propagation.PropagationGrid(n_z=cfg["n_z"], length_mm=params.length_mm,
                                       dt_us=cfg["dt_us"])
    result = propagation.propagate_pulse(t, env, cfg["coupling_rabi_khz"], params, grid)

    delay_peak = propagation.extract_delay(t, result.input_env_khz,
                                           result.output_env_khz, "peak")
    delay_centroid = propagation.extract_delay(t, result.input_env_khz,
                                               result.output_env_khz, "centroid")
    span = max(5.0, cfg["coupling_rabi_khz"] / 20.0)
    spec_grid = np.linspace(-span, span, 11)
    spectrum = eit.susceptibility_spectrum(params, spec_grid, cfg["probe_rabi_khz"],
                                           cfg["coupling_rabi_khz"])
    gd = eit.group_delay(spectrum, params)
    transmission = result.slab_energy[-1] / result.slab_energy[0]

    lines = ["t_us,input_abs_khz,output_abs_khz,output_re_khz,output_im_khz"]
    for i in range(len(t)):
        lines.append(",".join(repr(float(v)) for v in (
            t[i], abs(result.input_env_khz[i]), abs(result.output_env_khz[i]),
            result.output_env_khz[i].real, result.output_env_khz[i].imag)))
    files = [write_text(out / "slowlight_envelopes.csv", "\n".join(lines) + "\n")]

    report = (
        "slow-light transport\n"
        f"extracted delay (peak): {delay_peak:.6g} us\n"
        f"extracted delay (centroid): {delay_centroid:.6g} us\n"
        f"dispersion-slope prediction: {gd.delay_us:.6g} us\n"
        f"vacuum transit: {gd.vacuum_transit_us:.6g} us\n"
        f"energy transmission: {transmission:.6g}\n"
        f"delay factor (peak delay / pulse length): "
        f"{delay_peak / cfg['probe_len_us']:.6g}\n"
    )
    files.append(write_text(out / "slowlight_report.txt", report))

    if svg:
        ts = TimeSeries(t_us=t, channels={
            "input_abs_khz": np.abs(result.input_env_khz),
            "output_abs_khz": np.abs(result.output_env_khz),
        })
        files.append(render_svg(ts, out / "slowlight_envelopes.svg",
                                {"title": "slow light: input and delayed output",
                                 "y_label": "|envelope| (kHz)"}))
    return files


def run_routing(cfg: ScenarioConfig, out: Path, svg: bool) -> list[Path]:
    params = medium_from_config(cfg)
    t, env, _ = _probe_envelope(cfg)
    grid = propagation.PropagationGrid(n_z=cfg["n_z"], length_mm=params.length_mm,
                                       dt_us=cfg["dt_us"])
    omega_c = cfg["coupling_rabi_khz"]

    reference = propagation.propagate_pulse(t, env, omega_c, params, grid)
    readout = Pulse(Transition.COUPLING, cfg["readout_rabi_khz"],
                    cfg["readout_start_us"],
                    cfg["readout_start_us"] + cfg["readout_len_us"])
    coupling_env = np.full_like(t, omega_c) + pulse_envelope(readout, t)
    switched = propagation.propagate_pulse(t, env, omega_c, params, grid,
                                           coupling_env_khz=coupling_env)

    files = []
    for name, res in (("reference", reference), ("readout", switched)):
        lines = ["t_us,exit_abs_khz,exit_re_khz,exit_im_khz"]
        for i in range(len(t)):
            lines.append(",".join(repr(float(v)) for v in (
                t[i], abs(res.output_env_khz[i]),
                res.output_env_khz[i].real, res.output_env_khz[i].imag)))
        files.append(write_text(out / f"routing_{name}.csv", "\n".join(lines) + "\n"))

    dt = cfg["dt_us"]
    late = t >= cfg["readout_start_us"] + cfg["readout_len_us"]
    during = (t >= cfg["readout_start_us"]) & ~late
    e_ref_late = float(np.sum(np.abs(reference.output_env_khz[late]) ** 2) * dt)
    e_sw_late = float(np.sum(np.abs(switched.output_env_khz[late]) ** 2) * dt)
    burst = np.abs(switched.output_env_khz)
    burst[~during] = 0.0
    burst_peak_us = float(t[int(np.argmax(burst))])
    suppression = e_sw_late / e_ref_late if e_ref_late > 0 else float("nan")

    report = (
        "delayed routing composite\n"
        f"read-out window: [{cfg['readout_start_us']}, "
        f"{cfg['readout_start_us'] + cfg['readout_len_us']}] us\n"
        f"converted burst peak at: {burst_peak_us:.6g} us\n"
        f"late slow-light energy, reference: {e_ref_late:.6g}\n"
        f"late slow-light energy, with read-out: {e_sw_late:.6g}\n"
        f"late-energy suppression ratio: {suppression:.6g}\n"
    )
    files.append(write_text(out / "routing_report.txt", report))

    if svg:
        ts = TimeSeries(t_us=t, channels={
            "reference_exit": np.abs(reference.output_env_khz),
            "readout_exit": np.abs(switched.output_env_khz),
            "input": np.abs(reference.input_env_khz),
        })
        files.append(render_svg(ts, out / "routing_traces.svg",
                                {"title": "routing: slow light vs converted burst",
                                 "y_label": "|envelope| (kHz)"}))
    return files


def run_detuning_sweep(cfg: ScenarioConfig, out: Path, svg: bool) -> list[Path]:
    params = medium_from_config(cfg)
    grid = np.linspace(-cfg["sweep_span_khz"], cfg["sweep_span_khz"],
                       cfg["sweep_points"])
    template = _readout_pulse(cfg)
    shape, edge = _edge(cfg)

    def peak_signal(probe_khz: float, delta_khz: float) -> float:
        t0, t1 = cfg["prep_start_us"], cfg["prep_start_us"] + cfg["prep_len_us"]
        pulses = [
            Pulse(Transition.PROBE, probe_khz, t0, t1, shape, edge, delta_khz),
            Pulse(Transition.COUPLING, cfg["coupling_rabi_khz"], t0, t1, shape, edge),
        ]
        seq = PulseSequence(pulses, total_duration_us=cfg["readout_start_us"])
        _, rho = bloch.evolve(DensityMatrix.ground(1), seq, params, dt_us=cfg["dt_us"])
        res = fwm.readout_conversion(rho, template, params, dt_us=cfg["dt_us"])
        return float(np.max(np.abs(res.series.channel("e_d_arb"))))

    rows = []
    peaks_low, peaks_high = [], []
    for delta in grid:
        lo = peak_signal(cfg["probe_low_khz"], float(delta))
        hi = peak_signal(cfg["probe_high_khz"], float(delta))
        peaks_low.append(lo)
        peaks_high.append(hi)
        rows.append([float(delta), lo, hi])

    files = [write_table_csv(out / "detuning_sweep.csv",
                             ["delta2_khz", "peak_ed_low", "peak_ed_high"], rows)]
    argmax_low = float(grid[int(np.argmax(peaks_low))])
    argmax_high = float(grid[int(np.argmax(peaks_high))])
    report = (
        "peak converted signal versus two-photon detuning\n"
        f"low probe power ({cfg['probe_low_khz']} kHz): "
        f"maximum at {argmax_low:g} kHz\n"
        f"high probe power ({cfg['probe_high_khz']} kHz): "
        f"maximum at {argmax_high:g} kHz\n"
        "the high-power maximum is reported, not asserted\n"
    )
    files.append(write_text(out / "detuning_sweep_report.txt", report))
    if svg:
        offset = grid - grid[0]
        ts = TimeSeries(t_us=offset, channels={
            "peak_ed_low": np.array(peaks_low),
            "peak_ed_high": np.array(peaks_high),
        })
        files.append(render_svg(ts, out / "detuning_sweep.svg",
                                {"title": "peak converted signal (x axis offset by span)",
                                 "x_label": "delta2 + span (kHz)",
                                 "y_label": "peak |e_d| (arb)"}))
    return files


def run_phase_match(cfg: ScenarioConfig, out: Path, svg: bool) -> list[Path]:
    k = cfg["k_mag_rad_per_m"]
    k_p = WaveVector.from_angle(k, cfg["theta_p_mrad"] * 1e-3)
    k_c = WaveVector.from_angle(k, cfg["theta_c_mrad"] * 1e-3)
    k_a = WaveVector.from_angle(k, cfg["theta_a_mrad"] * 1e-3)
    k_d, mismatch = fwm.phase_match(k_c, k_p, k_a, cfg["omega_d_over_c_rad_per_m"])
    theta_d_mrad = float(np.arctan2(k_d.kx, k_d.kz)) * 1e3

    report = (
        "wavevector bookkeeping: k_d = k_c - k_p + k_a\n"
        f"beam angles (mrad): probe {cfg['theta_p_mrad']}, "
        f"coupling {cfg['theta_c_mrad']}, read-out {cfg['theta_a_mrad']}\n"
        f"k magnitude: {k!r} rad/m\n"
        f"k_d = ({k_d.kx!r}, {k_d.ky!r}, {k_d.kz!r}) rad/m\n"
        f"|k_d| = {k_d.norm()!r} rad/m\n"
        f"generated beam angle: {theta_d_mrad:.4f} mrad\n"
        f"mismatch | |k_d| - omega_d/c |: {mismatch!r} rad/m "
        f"({mismatch / k:.3e} of k)\n"
    )
    return [write_text(out / "phase_match.txt", report)]


SCENARIOS = {
    "fig2": run_fig2,
    "fig3": run_fig3,
    "fid": run_fid,
    "eit-spectrum": run_eit_spectrum,
    "slowlight": run_slowlight,
    "routing": run_routing,
    "detuning-sweep": run_detuning_sweep,
    "phase-match": run_phase_match,
}


def run_scenario(cfg: ScenarioConfig, out_dir: str | Path,
                 svg: bool = False) -> list[Path]:
    """Run one scenario; returns every file written (echo included)."""
    try:
        runner = SCENARIOS[cfg.scenario]
    except KeyError:
        raise ConfigError(
            f"unknown scenario {cfg.scenario!r}; valid: {', '.join(SCENARIOS)}"
        ) from None
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = [write_text(out / "resolved_config.txt", cfg.resolved_text())]
    files.extend(runner(cfg, out, svg))
    return files
