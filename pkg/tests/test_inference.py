"""Minimum detectable collapse rate: closed form and Monte-Carlo oracle."""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from waxsim import (
    BracketingError,
    ChannelToggles,
    CSLParams,
    DetectionConfig,
    DomainError,
    bisect_lambda_mc,
    detection_power_mc,
    ground_environment,
    min_detectable_lambda,
    space_environment,
    variance_excess,
)
from waxsim.constants import LAMBDA_GRW

GEOMETRY = CSLParams(collapse_rate=0.0, correlation_length=100e-9)
# composition of the collapse-rate and moment-evolution goldens at
# R = 120 nm, a = 100 nm, lambda = 1e-13 Hz, t = 100 s (50-digit arithmetic)
GOLDEN_EXCESS_100S = 3.4447718094116558e-9

GRID = tuple(np.geomspace(1.0, 100.0, 8))


class TestVarianceExcess:
    def test_zero_rate(self, silica):
        assert variance_excess(0.0, 50.0, silica, GEOMETRY) == 0.0

    def test_linear_in_rate(self, silica):
        one = variance_excess(1e-14, 50.0, silica, GEOMETRY)
        two = variance_excess(2e-14, 50.0, silica, GEOMETRY)
        assert_allclose(two, 2.0 * one, rtol=1e-12)

    def test_golden_reference_configuration(self, silica):
        assert_allclose(
            variance_excess(1e-13, 100.0, silica, GEOMETRY),
            GOLDEN_EXCESS_100S,
            rtol=1e-12,
        )

    def test_rejects_negative(self, silica):
        with pytest.raises(DomainError):
            variance_excess(1e-13, -1.0, silica, GEOMETRY)
        with pytest.raises(DomainError):
            variance_excess(-1e-13, 1.0, silica, GEOMETRY)


class TestClosedForm:
    def test_quadrupled_n_halves_lambda(self, silica, space):
        small = min_detectable_lambda(100, GRID, silica, space, GEOMETRY)
        large = min_detectable_lambda(400, GRID, silica, space, GEOMETRY)
        assert abs(large.lambda_min / small.lambda_min - 0.5) < 0.02

    def test_monotone_in_n(self, silica, space):
        values = [
            min_detectable_lambda(n, GRID, silica, space, GEOMETRY).lambda_min
            for n in (10, 30, 100, 300, 1000, 3000)
        ]
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_monotone_in_t_max(self, silica, space):
        values = []
        for t_max in (3.0, 10.0, 30.0, 100.0):
            grid = tuple(np.geomspace(0.5, t_max, 8))
            values.append(
                min_detectable_lambda(200, grid, silica, space, GEOMETRY).lambda_min
            )
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_longer_time_strictly_helps_without_decoherence(self, silica, space):
        # with all standard channels off the sensitivity grows faster than
        # the statistical error, so lambda_min strictly falls with t_max
        values = []
        for t_max in (10.0, 20.0, 40.0, 80.0):
            values.append(
                min_detectable_lambda(
                    200,
                    (t_max,),
                    silica,
                    space,
                    GEOMETRY,
                    toggles=ChannelToggles.none(),
                ).lambda_min
            )
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_noise_never_helps(self, silica, space):
        clean = min_detectable_lambda(200, GRID, silica, space, GEOMETRY)
        noisy = min_detectable_lambda(
            200, GRID, silica, space, GEOMETRY, measurement_noise=1e-5
        )
        assert noisy.lambda_min >= clean.lambda_min

    def test_grw_unit_identity(self, silica, space):
        res = min_detectable_lambda(100, GRID, silica, space, GEOMETRY)
        assert res.lambda_min_grw == res.lambda_min / LAMBDA_GRW

    def test_space_beats_ground_by_four_orders(self, silica):
        space_grid = tuple(np.geomspace(0.5, 100.0, 12))
        ground_grid = tuple(np.geomspace(0.5, 4.5, 12))
        lam_space = min_detectable_lambda(
            1000, space_grid, silica, space_environment(), GEOMETRY
        ).lambda_min
        lam_ground = min_detectable_lambda(
            1000, ground_grid, silica, ground_environment(), GEOMETRY
        ).lambda_min
        assert lam_space <= lam_ground / 1e4

    def test_reference_rate_reachable_in_space(self, silica, space):
        res = min_detectable_lambda(
            1000, tuple(np.geomspace(1.0, 100.0, 12)), silica, space, GEOMETRY
        )
        assert res.lambda_min <= 1e-13

    def test_best_time_reported(self, silica, space):
        res = min_detectable_lambda(100, GRID, silica, space, GEOMETRY)
        assert res.best_time in GRID

    def test_degenerate_grid_rejected(self, silica, space):
        with pytest.raises(DomainError):
            min_detectable_lambda(100, (0.0,), silica, space, GEOMETRY)
        with pytest.raises(DomainError):
            min_detectable_lambda(100, (), silica, space, GEOMETRY)
        with pytest.raises(DomainError):
            min_detectable_lambda(1, GRID, silica, space, GEOMETRY)

    def test_chi_square_aggregation(self, silica, space):
        best = min_detectable_lambda(200, GRID, silica, space, GEOMETRY)
        pooled = min_detectable_lambda(
            200,
            GRID,
            silica,
            space,
            GEOMETRY,
            detection=DetectionConfig(aggregation="chi-square-sum"),
        )
        # pooling all grid times lands near the best single time
        assert 0.2 * best.lambda_min < pooled.lambda_min < 5.0 * best.lambda_min
        smaller_n = min_detectable_lambda(
            50,
            GRID,
            silica,
            space,
            GEOMETRY,
            detection=DetectionConfig(aggregation="chi-square-sum"),
        )
        assert smaller_n.lambda_min > pooled.lambda_min

    def test_detection_config_validation(self):
        with pytest.raises(DomainError):
            DetectionConfig(confidence_z=0.0)
        with pytest.raises(DomainError):
            DetectionConfig(aggregation="median")


class TestMonteCarloOracle:
    def test_agrees_with_closed_form_within_factor_two(self, silica, space):
        n = 120
        closed = min_detectable_lambda(n, GRID, silica, space, GEOMETRY).lambda_min
        mc = bisect_lambda_mc(
            n,
            GRID,
            silica,
            space,
            GEOMETRY,
            seeds=range(1, 121),
            lambda_lo=1e-18,
            lambda_hi=1e-8,
        )
        assert 0.5 <= mc / closed <= 2.0

    def test_power_extremes(self, silica, space):
        n = 120
        closed = min_detectable_lambda(n, GRID, silica, space, GEOMETRY).lambda_min
        seeds = range(1, 201)
        high = detection_power_mc(
            10.0 * closed, n, GRID, silica, space, GEOMETRY, seeds=seeds
        )
        low = detection_power_mc(
            closed / 10.0, n, GRID, silica, space, GEOMETRY, seeds=seeds
        )
        assert high >= 0.99
        assert low <= 0.10

    def test_non_bracketing_raises_with_curve(self, silica, space):
        with pytest.raises(BracketingError) as err:
            bisect_lambda_mc(
                60,
                GRID,
                silica,
                space,
                GEOMETRY,
                seeds=range(1, 41),
                lambda_lo=1e-20,
                lambda_hi=1e-19,
            )
        assert len(err.value.power_curve) == 2

    def test_empty_seeds_rejected(self, silica, space):
        with pytest.raises(DomainError):
            bisect_lambda_mc(60, GRID, silica, space, GEOMETRY, seeds=())

    def test_no_positive_times_rejected(self, silica, space):
        with pytest.raises(DomainError):
            bisect_lambda_mc(
                60, (0.0,), silica, space, GEOMETRY, seeds=range(4)
            )
