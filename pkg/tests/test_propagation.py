import numpy as np
import pytest

from lsim import eit
from lsim.core import EdgeShape, MediumParams, Pulse, Transition, pulse_envelope
from lsim.errors import ConfigError, PulseDetectionError, RegimeError
from lsim.propagation import PropagationGrid, extract_delay, propagate_pulse

DT = 0.02


def time_grid(total_us, dt=DT):
    return np.arange(int(round(total_us / dt)) + 1) * dt


def hann_probe(t, rabi=15.0, t_on=2.0, length=40.0):
    pulse = Pulse(Transition.PROBE, rabi, t_on, t_on + length,
                  EdgeShape.RAISED_COSINE, length / 2)
    return pulse_envelope(pulse, t).astype(complex)


def transparent_params(length_mm=3.0, kappa=1.5, n_rel=1.0):
    return MediumParams(gamma12_khz=0.0, gamma13_khz=1.0, gamma23_khz=1.0,
                        length_mm=length_mm, coupling_const=kappa,
                        n_density_rel=n_rel)


class TestPropagatePulse:
    def test_vacuum_identity(self):
        t = time_grid(30.0)
        env = hann_probe(t, length=10.0)
        params = transparent_params(kappa=0.0)
        res = propagate_pulse(t, env, 200.0, params, PropagationGrid(8, 3.0, DT))
        assert np.max(np.abs(res.output_env_khz - env)) <= 1e-12

    def test_weak_probe_guard(self):
        t = time_grid(30.0)
        env = hann_probe(t, rabi=80.0, length=10.0)
        with pytest.raises(RegimeError):
            propagate_pulse(t, env, 200.0, transparent_params(),
                            PropagationGrid(8, 3.0, DT))

    def test_slab_update_guard(self):
        t = time_grid(30.0)
        env = hann_probe(t, rabi=10.0, length=10.0)
        params = MediumParams(gamma12_khz=2.0, gamma13_khz=2.0, gamma23_khz=2.0,
                              coupling_const=5000.0)
        with pytest.raises(ConfigError, match="n_z"):
            propagate_pulse(t, env, 100.0, params, PropagationGrid(2, 3.0, DT))

    def test_energy_monotone_in_absorbing_medium(self):
        t = time_grid(30.0)
        pulse = Pulse(Transition.PROBE, 10.0, 2.0, 12.0, EdgeShape.RAISED_COSINE, 3.0)
        env = pulse_envelope(pulse, t).astype(complex)
        params = MediumParams(gamma12_khz=1.0, gamma13_khz=2.0, gamma23_khz=2.0,
                              coupling_const=0.5)
        res = propagate_pulse(t, env, 150.0, params, PropagationGrid(64, 3.0, DT))
        assert np.all(np.diff(res.slab_energy) <= 0.0)

    def test_low_loss_delay_at_transparency(self):
        # on-resonance EIT carries the pulse with >= 90% of its energy
        t = time_grid(80.0)
        pulse = Pulse(Transition.PROBE, 12.0, 2.0, 22.0, EdgeShape.RAISED_COSINE, 10.0)
        env = pulse_envelope(pulse, t).astype(complex)
        params = transparent_params(kappa=2.0)
        res = propagate_pulse(t, env, 250.0, params, PropagationGrid(128, 3.0, DT))
        delay = extract_delay(t, res.input_env_khz, res.output_env_khz, "peak")
        assert res.slab_energy[-1] / res.slab_energy[0] >= 0.90
        assert delay > 1.0

    def test_peak_delay_matches_dispersion_prediction(self):
        t = time_grid(100.0)
        env = hann_probe(t)
        params = transparent_params(kappa=1.5)
        res = propagate_pulse(t, env, 300.0, params, PropagationGrid(64, 3.0, DT))
        measured = extract_delay(t, res.input_env_khz, res.output_env_khz, "peak")
        spec = eit.susceptibility_spectrum(params, np.linspace(-5, 5, 11), 15.0, 300.0)
        predicted = eit.group_delay(spec, params).delay_us
        assert measured == pytest.approx(predicted, rel=0.10)

    def test_delay_proportional_to_length(self):
        t = time_grid(100.0)
        env = hann_probe(t)
        delays = []
        for length in (3.0, 6.0):
            params = transparent_params(length_mm=length)
            res = propagate_pulse(t, env, 300.0, params,
                                  PropagationGrid(64, length, DT))
            delays.append(extract_delay(t, res.input_env_khz,
                                        res.output_env_khz, "centroid"))
        assert delays[1] / delays[0] == pytest.approx(2.0, rel=0.05)

    def test_grid_convergence(self):
        t = time_grid(100.0)
        env = hann_probe(t)
        params = transparent_params()
        delays = []
        for n_z in (64, 128):
            res = propagate_pulse(t, env, 300.0, params,
                                  PropagationGrid(n_z, 3.0, DT))
            delays.append(extract_delay(t, res.input_env_khz,
                                        res.output_env_khz, "peak"))
        assert abs(delays[1] - delays[0]) / delays[0] <= 0.02

    def test_slab_energy_record_shape(self):
        t = time_grid(30.0)
        env = hann_probe(t, length=10.0)
        res = propagate_pulse(t, env, 200.0, transparent_params(),
                              PropagationGrid(16, 3.0, DT))
        assert res.slab_energy.shape == (17,)

    def test_nonuniform_grid_rejected(self):
        t = np.array([0.0, 0.02, 0.05, 0.06])
        with pytest.raises(ConfigError):
            propagate_pulse(t, np.zeros(4, complex), 100.0, transparent_params(),
                            PropagationGrid(4, 3.0, DT))

    def test_grid_invariants(self):
        with pytest.raises(ConfigError):
            PropagationGrid(n_z=1, length_mm=3.0, dt_us=DT)
        with pytest.raises(ConfigError):
            PropagationGrid(n_z=8, length_mm=3.0, dt_us=DT, retarded_frame=False)


class TestExtractDelay:
    def test_identical_series(self):
        t = time_grid(40.0, 0.05)
        x = np.exp(-0.5 * ((t - 15.0) / 3.0) ** 2)
        assert abs(extract_delay(t, x, x, "peak")) <= 0.005
        assert abs(extract_delay(t, x, x, "centroid")) <= 0.005

    def test_exact_shift(self):
        t = time_grid(60.0, 0.05)
        x = np.exp(-0.5 * ((t - 15.0) / 3.0) ** 2)
        y = np.exp(-0.5 * ((t - 22.0) / 3.0) ** 2)
        for method in ("peak", "centroid"):
            assert extract_delay(t, x, y, method) == pytest.approx(7.0, abs=0.005)

    def test_centroid_equals_filter_group_delay(self):
        # gaussian through a linear-phase gaussian filter: centroid moves by
        # exactly the filter's group delay
        dt = 0.02
        t = time_grid(120.0, dt)
        x = np.exp(-0.5 * ((t - 30.0) / 4.0) ** 2)
        freq = np.fft.fftfreq(len(t), d=dt) * 2 * np.pi
        tau0 = 6.5
        h = np.exp(-1j * freq * tau0) * np.exp(-(freq / 1.5) ** 2)
        y = np.fft.ifft(np.fft.fft(x) * h)
        delay = extract_delay(t, x, np.abs(y), "centroid")
        assert delay == pytest.approx(tau0, abs=0.01)

    def test_no_pulse_detected(self):
        rng = np.random.default_rng(0)
        t = time_grid(10.0, 0.05)
        noise = rng.uniform(0.5, 1.0, size=len(t))
        with pytest.raises(PulseDetectionError):
            extract_delay(t, noise, noise, "peak")

    def test_unknown_method(self):
        t = time_grid(10.0, 0.05)
        x = np.exp(-0.5 * ((t - 5.0) / 1.0) ** 2)
        with pytest.raises(ConfigError):
            extract_delay(t, x, x, "wavelet")
