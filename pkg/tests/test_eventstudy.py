"""Tests for the monthly multi-event study estimators."""

import warnings

import numpy as np
import pytest

from estimators import (
    abnormal_returns,
    abnormal_returns_constant_mean,
    abnormal_returns_raw,
    average_cross_correlation,
    events_with_history,
    grankt_test,
    patell_adjusted_test,
    run_event_study,
    standardized_cars,
)
from models import (
    BaselineModel,
    DataError,
    DroppedEventsWarning,
    EventStudySpec,
    MonthIndex,
    MonthlySeries,
)


def injected_returns(rng, n_events=20, effect=0.05, spec=EventStudySpec(), scale=0.01):
    """iid returns with ``effect`` added to every event-window month of disjoint event blocks."""
    block = spec.estimation_window_length + spec.window_length
    values = rng.normal(0.0, scale, n_events * block + 5)
    start = MonthIndex(1800, 1)
    months = []
    for k in range(n_events):
        opening = k * block + spec.estimation_window_length
        values[opening:opening + spec.window_length] += effect
        months.append(start.shift(opening - spec.pre))
    return MonthlySeries.from_array("r", start, values), months


class TestAbnormalReturns:
    def test_constant_mean_uses_own_estimation_window(self, returns_series, start):
        spec = EventStudySpec(BaselineModel.CONSTANT_MEAN, -1, 1, 60)
        [sample] = abnormal_returns_constant_mean(returns_series, [start.shift(80)], spec)
        values = returns_series.to_array()
        baseline = values[19:79].mean()
        np.testing.assert_allclose(sample.event_ar, values[79:82] - baseline)
        np.testing.assert_allclose(sample.estimation_ar, values[19:79] - baseline)
        assert sample.estimation_months[0] == start.shift(19)
        assert sample.estimation_months[-1] == start.shift(78)

    def test_raw_model_uses_full_sample_mean(self, returns_series, start):
        spec = EventStudySpec(BaselineModel.RAW_RETURNS, -1, 1, 60)
        [sample] = abnormal_returns_raw(returns_series, [start.shift(30)], spec)
        values = returns_series.to_array()
        np.testing.assert_allclose(sample.event_ar, values[29:32] - values.mean())
        # Estimation window shortened at the series start.
        assert len(sample.estimation_ar) == 29

    def test_constant_mean_needs_full_history(self, returns_series, start):
        with pytest.raises(DataError, match="pre-event history"):
            abnormal_returns_constant_mean(returns_series, [start.shift(30)])

    def test_raw_model_needs_a_few_months(self, returns_series, start):
        spec = EventStudySpec(BaselineModel.RAW_RETURNS)
        with pytest.raises(DataError, match="at least 4"):
            abnormal_returns_raw(returns_series, [start.shift(2)], spec)

    def test_window_past_series_end(self, returns_series, start):
        with pytest.raises(DataError, match="exceeds the data"):
            abnormal_returns_constant_mean(returns_series, [start.shift(239)])

    def test_missing_return_drops_event_with_warning(self, returns_series, start):
        values = returns_series.to_array()
        values[150] = np.nan
        gappy = returns_series.with_values(values)
        spec = EventStudySpec()
        with pytest.warns(DroppedEventsWarning, match=str(start.shift(151))):
            kept = abnormal_returns(gappy, [start.shift(100), start.shift(151), start.shift(220)], spec)
        assert [s.event_month for s in kept] == [start.shift(100), start.shift(220)]


class TestEventsWithHistory:
    def test_split_and_dedupe(self, returns_series, start):
        months = [start.shift(100), start.shift(30), start.shift(100), start.shift(239)]
        kept, skipped = events_with_history(returns_series, months, EventStudySpec())
        assert kept == [start.shift(100)]
        assert skipped == [start.shift(30), start.shift(239)]

    def test_raw_model_needs_less_history(self, returns_series, start):
        spec = EventStudySpec(BaselineModel.RAW_RETURNS)
        kept, skipped = events_with_history(returns_series, [start.shift(30)], spec)
        assert kept == [start.shift(30)]
        assert skipped == []


class TestPatell:
    def test_unadjusted_matches_classic_formula(self):
        scars = np.array([1.0, 0.5, -0.2, 2.0])
        lengths = np.array([60, 60, 40, 60])
        result = patell_adjusted_test(scars, lengths, 0.0)
        expected = scars.sum() / np.sqrt(np.sum((lengths - 1) / (lengths - 3)))
        assert result.statistic == pytest.approx(expected)
        assert result.name == "patell_adjusted"

    def test_cross_correlation_shrinks_statistic(self):
        scars = np.full(10, 0.8)
        lengths = np.full(10, 60)
        plain = patell_adjusted_test(scars, lengths, 0.0).statistic
        adjusted = patell_adjusted_test(scars, lengths, 0.1).statistic
        assert adjusted == pytest.approx(plain * np.sqrt(0.9 / 1.9))

    def test_short_estimation_window(self):
        with pytest.raises(DataError):
            patell_adjusted_test(np.array([1.0]), np.array([3]))

    def test_undefined_for_strong_negative_correlation(self):
        with pytest.raises(DataError, match="undefined"):
            patell_adjusted_test(np.ones(5), np.full(5, 60), -0.5)

    def test_disjoint_windows_have_no_cross_correlation(self, rng):
        returns, months = injected_returns(rng, n_events=5, effect=0.0)
        samples = abnormal_returns(returns, months, EventStudySpec())
        assert average_cross_correlation(samples) == 0.0

    def test_identical_windows_fully_correlated(self, returns_series, start):
        spec = EventStudySpec(BaselineModel.RAW_RETURNS, 0, 0, 60)
        samples = abnormal_returns(returns_series, [start.shift(100), start.shift(100)], spec)
        assert average_cross_correlation(samples) == pytest.approx(1.0)


class TestGrankt:
    def test_single_event_with_large_effect_ranks_top(self, returns_series, start):
        values = returns_series.to_array()
        values[99:102] += 1.0
        spec = EventStudySpec()
        samples = abnormal_returns(returns_series.with_values(values), [start.shift(100)], spec)
        result = grankt_test(samples, spec)
        assert result.df == 59
        assert result.statistic > 1.0

    def test_needs_enough_months(self, returns_series, start):
        spec = EventStudySpec(BaselineModel.CONSTANT_MEAN, -1, 1, 5)
        samples = abnormal_returns(returns_series, [start.shift(100)], spec)
        with pytest.raises(DataError, match="GRANKT needs"):
            grankt_test(samples, spec)

    def test_no_events(self):
        with pytest.raises(DataError):
            grankt_test([], EventStudySpec())


class TestRunEventStudy:
    def test_caar_recovers_injected_effect(self, rng):
        returns, months = injected_returns(rng, n_events=30, effect=0.05)
        result = run_event_study(returns, months, EventStudySpec(), "injected")
        assert result.n == 30
        assert result.caar == pytest.approx(0.15, abs=0.02)
        assert result.tests["patell_adjusted"].p_value < 0.01
        assert result.tests["grankt"].p_value < 0.01
        assert result.to_dict()["patell_adjusted_stars"] == "***"

    def test_no_effect_gives_small_caar(self, rng):
        returns, months = injected_returns(rng, n_events=30, effect=0.0)
        result = run_event_study(returns, months, EventStudySpec())
        assert abs(result.caar) < 0.01

    def test_standardized_cars_scale(self, rng):
        returns, months = injected_returns(rng, n_events=3, effect=0.0)
        spec = EventStudySpec()
        samples = abnormal_returns(returns, months, spec)
        scars = standardized_cars(samples, spec)
        for sample, scar in zip(samples, scars):
            sd = np.std(sample.estimation_ar, ddof=1)
            assert scar == pytest.approx(sample.car / (sd * np.sqrt(3 * (1 + 3 / 60))))

    @pytest.mark.parametrize("factor, sign", [(3.7, 1.0), (0.2, 1.0), (-1.0, -1.0)])
    def test_tests_invariant_to_scale_and_flip_with_sign(self, rng, factor, sign):
        returns, months = injected_returns(rng, n_events=20, effect=0.01)
        base = run_event_study(returns, months, EventStudySpec())
        scaled = run_event_study(returns.with_values(factor * returns.to_array()), months, EventStudySpec())
        for name in ("patell_adjusted", "grankt"):
            assert scaled.tests[name].statistic == pytest.approx(sign * base.tests[name].statistic, rel=1e-9)
            assert scaled.tests[name].p_value == pytest.approx(base.tests[name].p_value, rel=1e-9)

    def test_only_requested_tests(self, rng):
        returns, months = injected_returns(rng, n_events=5)
        spec = EventStudySpec(tests=frozenset({"grankt"}))
        result = run_event_study(returns, months, spec)
        assert set(result.tests) == {"grankt"}

    def test_no_events_left(self, returns_series):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            with pytest.raises(DataError, match="no events"):
                run_event_study(returns_series, [], EventStudySpec(), "empty")
