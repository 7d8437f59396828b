"""Campaign simulation: determinism, statistics, width estimation."""
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from waxsim import (
    CampaignConfig,
    ChannelToggles,
    CSLParams,
    DomainError,
    campaign_curve,
    campaign_to_csv,
    estimate_width,
    run_campaign,
    sampling_sigma,
)

SIGMA0 = 2.2956497833141595e-12  # ground-state width of the default sphere


def make_config(**overrides):
    defaults = dict(time_grid=(0.0, 1.0, 10.0), runs_per_time=100, rng_seed=7)
    defaults.update(overrides)
    return CampaignConfig(**defaults)


class TestCampaignConfig:
    def test_rejects_empty_grid(self):
        with pytest.raises(DomainError):
            make_config(time_grid=())

    def test_rejects_single_run(self):
        with pytest.raises(DomainError):
            make_config(runs_per_time=1)

    def test_rejects_unsorted_or_negative_grid(self):
        with pytest.raises(DomainError):
            make_config(time_grid=(1.0, 0.5))
        with pytest.raises(DomainError):
            make_config(time_grid=(-1.0, 0.5))

    def test_rejects_negative_noise(self):
        with pytest.raises(DomainError):
            make_config(measurement_noise=-1e-12)
        with pytest.raises(DomainError):
            make_config(drift_velocity_std=-1e-9)


class TestDeterminism:
    def test_same_seed_identical(self, silica, ground):
        config = make_config()
        a = run_campaign(config, silica, ground)
        b = run_campaign(config, silica, ground)
        assert np.array_equal(a.samples, b.samples)
        assert a.to_csv() == b.to_csv()

    def test_different_seed_differs(self, silica, ground):
        a = run_campaign(make_config(rng_seed=1), silica, ground)
        b = run_campaign(make_config(rng_seed=2), silica, ground)
        assert not np.array_equal(a.samples, b.samples)

    def test_parallel_matches_serial(self, silica, ground):
        config = make_config(time_grid=tuple(float(t) for t in range(0, 12)))
        serial = run_campaign(config, silica, ground)
        threaded = run_campaign(config, silica, ground, workers=4)
        assert serial.to_csv() == threaded.to_csv()

    def test_estimates_reproducible(self, silica, ground):
        config = make_config()
        first = campaign_to_csv(campaign_curve(config, silica, ground))
        second = campaign_to_csv(campaign_curve(config, silica, ground))
        assert first == second


class TestStatistics:
    def test_variance_additivity(self, silica, ground):
        # generated variance must match x_var + (v t)^2 + noise^2 within
        # 3 standard errors of the variance estimate at N = 1e5
        config = make_config(
            time_grid=(10.0,),
            runs_per_time=100_000,
            measurement_noise=1e-6,
            drift_velocity_std=1e-7,
            rng_seed=101,
        )
        data = run_campaign(config, silica, ground)
        target = sampling_sigma(config, silica, ground)[0] ** 2
        sample_var = np.var(data.samples[0], ddof=1)
        se = target * math.sqrt(2.0 / (config.runs_per_time - 1))
        assert abs(sample_var - target) < 3.0 * se

    def test_ground_state_width_at_release(self, silica, ground):
        config = make_config(time_grid=(0.0, 1.0), runs_per_time=100_000, rng_seed=5)
        data = run_campaign(config, silica, ground, toggles=ChannelToggles.none())
        sample_std = np.std(data.samples[0], ddof=1)
        assert_allclose(sample_std, SIGMA0, rtol=0.02)

    def test_large_n_tracks_model_variance(self, silica, ground):
        config = make_config(time_grid=(0.5, 5.0), runs_per_time=100_000, rng_seed=17)
        data = run_campaign(config, silica, ground)
        for row, sigma in zip(data.samples, data.true_sigmas):
            se = sigma**2 * math.sqrt(2.0 / (config.runs_per_time - 1))
            assert abs(np.var(row, ddof=1) - sigma**2) < 3.0 * se

    def test_collapse_channel_inflates_samples(self, silica, space):
        config = make_config(time_grid=(100.0,), runs_per_time=20_000, rng_seed=3)
        csl = CSLParams(collapse_rate=1e-12)
        off = run_campaign(config, silica, space, toggles=ChannelToggles.standard())
        on = run_campaign(config, silica, space, csl, ChannelToggles())
        assert np.var(on.samples[0]) > np.var(off.samples[0])


class TestEstimateWidth:
    def test_constant_samples_give_zero(self):
        # 8 samples so the float mean is exact and the deviations vanish
        est = estimate_width(1.0, [3.0e-9] * 8)
        assert est.sigma_hat == 0.0
        assert est.standard_error == 0.0

    def test_standard_error_formula(self):
        rng = np.random.default_rng(2)
        x = rng.normal(0.0, 1e-9, size=50)
        est = estimate_width(2.0, x)
        assert_allclose(est.sigma_hat, np.std(x, ddof=1), rtol=1e-12)
        assert_allclose(
            est.standard_error, est.sigma_hat * math.sqrt(1.0 / 98.0), rtol=1e-12
        )
        assert est.sample_count == 50

    def test_error_halves_when_n_quadruples(self):
        rng = np.random.default_rng(3)
        x = rng.normal(0.0, 1e-9, size=200)
        small = estimate_width(1.0, x)
        big = estimate_width(1.0, np.tile(x, 4))
        # same sigma_hat up to the ddof correction, a quarter the variance SE
        assert abs(big.standard_error / small.standard_error - 0.5) < 0.02

    def test_rejects_short_input(self):
        with pytest.raises(DomainError):
            estimate_width(1.0, [1.0])

    def test_calibration_four_sigma(self):
        # |sigma_hat - sigma| < 4 SE in at least 99% of seeded repetitions
        sigma = 2.5e-9
        hits = 0
        reps = 1000
        n = 50
        rng = np.random.default_rng(11)
        for _ in range(reps):
            est = estimate_width(1.0, rng.normal(0.0, sigma, size=n))
            if abs(est.sigma_hat - sigma) < 4.0 * est.standard_error:
                hits += 1
        assert hits >= 0.99 * reps

    def test_coverage_calibration(self, silica, ground):
        # nominal 1-sigma error bars cover the generating width 68% +- 3%
        grid = (1.0, 10.0)
        n = 100
        campaigns = 10_000
        covered = 0
        total = 0
        truth = sampling_sigma(make_config(time_grid=grid), silica, ground)
        for seed in range(campaigns):
            config = make_config(time_grid=grid, runs_per_time=n, rng_seed=seed)
            data = run_campaign(config, silica, ground)
            for row, sigma in zip(data.samples, truth):
                est = estimate_width(1.0, row)
                covered += abs(est.sigma_hat - sigma) < est.standard_error
                total += 1
        coverage = covered / total
        assert 0.65 <= coverage <= 0.71


class TestSerialization:
    def test_raw_csv_shape(self, silica, ground):
        config = make_config(time_grid=(0.0, 2.0), runs_per_time=3)
        data = run_campaign(config, silica, ground)
        lines = data.to_csv().splitlines()
        assert lines[0] == "t_s,run_index,x_m"
        assert len(lines) == 1 + 2 * 3
        t, run, x = lines[1].split(",")
        assert float(t) == 0.0 and run == "0"
        float(x)  # parses

    def test_estimate_csv_format(self, silica, ground):
        estimates = campaign_curve(make_config(), silica, ground)
        lines = campaign_to_csv(estimates).splitlines()
        assert lines[0] == "t_s,sigma_hat_m,sigma_err_m,n_samples"
        assert len(lines) == 4
        assert lines[1].endswith(",100")

    def test_single_time_grid(self, silica, ground):
        estimates = campaign_curve(
            make_config(time_grid=(5.0,)), silica, ground
        )
        assert len(estimates) == 1
        assert estimates[0].t == 5.0
