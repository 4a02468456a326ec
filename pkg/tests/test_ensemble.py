import numpy as np
import pytest

from lsim import bloch, ensemble
from lsim.core import DensityMatrix, MediumParams, Pulse, PulseSequence, TimeSeries, Transition
from lsim.ensemble import Distribution, EnsembleSpec, Sampling
from lsim.errors import ConfigError, DecayNotFoundError

NO_DECAY = MediumParams(gamma12_khz=0.0, gamma13_khz=0.0, gamma23_khz=0.0)

FIG2_PREP = PulseSequence([Pulse(Transition.PROBE, 50.0, 0.0, 10.0),
                           Pulse(Transition.COUPLING, 100.0, 0.0, 10.0)], 35.0)


class TestSampleDetunings:
    def test_single_member_sits_at_center(self):
        spec = EnsembleSpec(n_members=1, fwhm_khz=30.0)
        assert ensemble.sample_detunings(spec) == [(0.0, 1.0)]

    def test_quantile_symmetry(self):
        spec = EnsembleSpec(n_members=64, fwhm_khz=30.0)
        samples = ensemble.sample_detunings(spec)
        deltas = np.array([d for d, _ in samples])
        assert abs(deltas.sum()) <= 1e-9

    def test_weights_sum_to_one(self):
        for n in (1, 7, 201, 401):
            samples = ensemble.sample_detunings(EnsembleSpec(n_members=n))
            assert abs(sum(w for _, w in samples) - 1.0) <= 1e-12

    def test_monte_carlo_lorentzian_iqr(self):
        # Lorentzian interquartile range equals the FWHM
        spec = EnsembleSpec(n_members=10_000, fwhm_khz=30.0,
                            sampling=Sampling.MONTE_CARLO, seed=99)
        deltas = np.array([d for d, _ in ensemble.sample_detunings(spec)])
        iqr = np.percentile(deltas, 75) - np.percentile(deltas, 25)
        assert iqr == pytest.approx(30.0, rel=0.05)

    def test_monte_carlo_seed_deterministic(self):
        spec = EnsembleSpec(n_members=100, sampling=Sampling.MONTE_CARLO, seed=3)
        assert ensemble.sample_detunings(spec) == ensemble.sample_detunings(spec)

    def test_quantile_deterministic(self):
        spec = EnsembleSpec(n_members=201)
        a = ensemble.sample_detunings(spec)
        b = ensemble.sample_detunings(spec)
        assert a == b

    def test_gaussian_quantiles_match_fwhm(self):
        from math import erf, log, sqrt
        spec = EnsembleSpec(n_members=10_001, distribution=Distribution.GAUSSIAN,
                            fwhm_khz=30.0)
        deltas = np.array([d for d, _ in ensemble.sample_detunings(spec)])
        # mass within +-FWHM/2 of a gaussian is erf(sqrt(ln 2)) ~ 0.7610
        assert np.mean(np.abs(deltas) <= 15.0) == pytest.approx(erf(sqrt(log(2))), abs=0.01)
        assert deltas.std() == pytest.approx(30.0 / (2 * sqrt(2 * log(2))), rel=0.01)

    def test_zero_members_rejected(self):
        with pytest.raises(ConfigError):
            EnsembleSpec(n_members=0)

    def test_lorentzian_tails_restricted(self):
        spec = EnsembleSpec(n_members=4001, fwhm_khz=30.0)
        deltas = np.array([d for d, _ in ensemble.sample_detunings(spec)])
        assert np.abs(deltas).max() <= ensemble.LORENTZIAN_CLIP_FWHM * 30.0


class TestEnsembleEvolve:
    def test_single_member_equals_bloch(self):
        spec = EnsembleSpec(n_members=1, fwhm_khz=30.0)
        avg = ensemble.ensemble_evolve(DensityMatrix.ground(1), FIG2_PREP, NO_DECAY,
                                       spec, dt_us=0.01)
        single, _ = bloch.evolve(DensityMatrix.ground(1), FIG2_PREP, NO_DECAY,
                                 delta_inh_khz=0.0, dt_us=0.01)
        for name in avg.channels:
            assert np.array_equal(avg.channel(name), single.channel(name))

    def test_zero_width_matches_single_member(self):
        spec = EnsembleSpec(n_members=17, fwhm_khz=0.0)
        avg = ensemble.ensemble_evolve(DensityMatrix.ground(1), FIG2_PREP, NO_DECAY,
                                       spec, dt_us=0.01)
        single, _ = bloch.evolve(DensityMatrix.ground(1), FIG2_PREP, NO_DECAY,
                                 dt_us=0.01)
        for name in avg.channels:
            assert np.allclose(avg.channel(name), single.channel(name), atol=1e-12)

    def test_averaged_coherence_dephases_while_members_persist(self):
        # gamma12 = 0: each member keeps |rho12| after the pulses; the average decays
        spec = EnsembleSpec(n_members=201, fwhm_khz=30.0)
        params = MediumParams(gamma12_khz=0.0)
        avg = ensemble.ensemble_evolve(DensityMatrix.ground(1), FIG2_PREP, params,
                                       spec, dt_us=0.01, output_stride=10)
        single, _ = bloch.evolve(DensityMatrix.ground(1), FIG2_PREP, params,
                                 delta_inh_khz=0.0, dt_us=0.01, output_stride=10)
        t = avg.t_us
        end = np.argmin(np.abs(t - 10.0))
        late = np.argmin(np.abs(t - 30.0))
        avg_mag = np.abs(avg.channel("re_rho12"))
        single_mag = np.abs(single.channel("re_rho12"))
        assert avg_mag[late] < 0.2 * avg_mag[end]
        assert single_mag[late] == pytest.approx(single_mag[end], rel=1e-6)

    def test_reduction_is_linear_in_members(self):
        spec = EnsembleSpec(n_members=11, fwhm_khz=30.0)
        avg = ensemble.ensemble_evolve(DensityMatrix.ground(1), FIG2_PREP, NO_DECAY,
                                       spec, dt_us=0.02)
        manual = {}
        for delta, weight in ensemble.sample_detunings(spec):
            ts, _ = bloch.evolve(DensityMatrix.ground(1), FIG2_PREP, NO_DECAY,
                                 delta_inh_khz=delta, dt_us=0.02)
            for name in ts.channels:
                manual.setdefault(name, np.zeros_like(ts.channel(name)))
                manual[name] += weight * ts.channel(name)
        for name in manual:
            assert np.max(np.abs(avg.channel(name) - manual[name])) <= 1e-12


class TestFidDecayTime:
    def test_synthetic_exponential(self):
        t = np.arange(0.0, 40.0, 0.05)
        ts = TimeSeries(t, {"re_rho12": np.exp(-t / 7.0)})
        assert ensemble.fid_decay_time(ts, "re_rho12") == pytest.approx(7.0, abs=0.1)

    def test_lorentzian_ensemble_fid(self):
        # Lorentzian width 30 kHz dephases in 1/(pi*fwhm) = 10.61 us
        spec = EnsembleSpec(n_members=401, fwhm_khz=30.0)
        seq = PulseSequence([], 30.0)
        rho0 = DensityMatrix.spin_superposition(0.5)
        ts = ensemble.ensemble_evolve(rho0, seq, NO_DECAY, spec, dt_us=0.02)
        t2 = ensemble.fid_decay_time(ts, "re_rho12")
        assert t2 == pytest.approx(1.0 / (np.pi * 30e-3), rel=0.05)

    def test_gaussian_ensemble_fid(self):
        # amplitude envelope exp(-(pi*fwhm*t)^2 / (4 ln 2)) reaches 1/e at
        # 2*sqrt(ln 2)/(pi*fwhm); for 30 kHz that is 17.67 us
        expected = 2.0 * np.sqrt(np.log(2.0)) / (np.pi * 30e-3)
        spec = EnsembleSpec(n_members=401, fwhm_khz=30.0,
                            distribution=Distribution.GAUSSIAN)
        seq = PulseSequence([], 40.0)
        rho0 = DensityMatrix.spin_superposition(0.5)
        ts = ensemble.ensemble_evolve(rho0, seq, NO_DECAY, spec, dt_us=0.02)
        t2 = ensemble.fid_decay_time(ts, "re_rho12")
        assert t2 == pytest.approx(expected, rel=0.05)

    def test_fid_envelope_matches_lorentzian_transform(self):
        # discrete equal-weight sampling tracks exp(-pi*fwhm*t) to the
        # truncation floor (~2% of the initial value at 401 members)
        spec = EnsembleSpec(n_members=401, fwhm_khz=30.0)
        seq = PulseSequence([], 30.0)
        rho0 = DensityMatrix.spin_superposition(0.5)
        ts = ensemble.ensemble_evolve(rho0, seq, NO_DECAY, spec, dt_us=0.02)
        ref = 0.5 * np.exp(-np.pi * 30e-3 * ts.t_us)
        err = np.max(np.abs(ts.channel("re_rho12") - ref))
        assert err <= 0.025 * 0.5

    def test_no_decay_raises(self):
        t = np.arange(0.0, 10.0, 0.1)
        ts = TimeSeries(t, {"re_rho12": np.ones_like(t)})
        with pytest.raises(DecayNotFoundError):
            ensemble.fid_decay_time(ts, "re_rho12")


class TestTwoPhotonMap:
    def test_single_point_equals_evolve(self):
        sm = ensemble.two_photon_map(DensityMatrix.ground(1), FIG2_PREP, NO_DECAY,
                                     np.array([0.0]), dt_us=0.02)
        ts, _ = bloch.evolve(DensityMatrix.ground(1), FIG2_PREP, NO_DECAY, dt_us=0.02)
        assert np.array_equal(sm.values[0], ts.channel("re_rho12"))

    def test_symmetric_in_detuning(self):
        grid = np.array([-15.0, 0.0, 15.0])
        sm = ensemble.two_photon_map(DensityMatrix.ground(1), FIG2_PREP, NO_DECAY,
                                     grid, dt_us=0.01, channel="re_rho12")
        assert np.max(np.abs(sm.values[0] - sm.values[2])) <= 1e-9

    def test_coherence_peaks_at_line_center(self):
        grid = np.linspace(-50.0, 50.0, 101)
        params = MediumParams(gamma12_khz=0.0)
        sm = ensemble.two_photon_map(DensityMatrix.ground(1), FIG2_PREP, params,
                                     grid, dt_us=0.01, channel="re_rho12",
                                     output_stride=100)
        i_end = int(np.argmin(np.abs(sm.t_us - 10.0)))
        column = np.abs(sm.values[:, i_end])
        assert int(np.argmax(column)) == 50

    def test_empty_grid_rejected(self):
        with pytest.raises(ConfigError):
            ensemble.two_photon_map(DensityMatrix.ground(1), FIG2_PREP, NO_DECAY,
                                    np.array([]), dt_us=0.02)
