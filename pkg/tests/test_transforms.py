"""Tests for return, volatility and feature transforms."""

import math
from datetime import date

import numpy as np
import pytest

from models import DailyQuote, DataError, EventFilter, MonthIndex, MonthlySeries, month_range, series_from_values
from transforms import (
    PARKINSON_CONSTANT,
    annual_liquidity,
    baxter_king,
    baxter_king_weights,
    cumulative_count,
    distance_feature,
    event_attribute_series,
    event_dummies,
    interaction_dummy,
    lag,
    lead,
    liquidity,
    located_distance_series,
    log_return,
    multiple_events_dummy,
    parkinson_intraday,
    realized_vol,
    selection_indicator,
    spread,
    versts_to_km,
)


class TestReturns:
    def test_log_return(self, start):
        s = series_from_values("yield", start, [100.0, 110.0, None, 121.0, 121.0])
        r = log_return(s)
        assert r.name == "yield_return"
        values = r.to_array()
        assert np.isnan(values[0])
        assert values[1] == pytest.approx(math.log(1.1))
        assert np.isnan(values[2]) and np.isnan(values[3])
        assert values[4] == 0.0

    def test_log_return_array_input(self):
        out = log_return([100.0, 200.0])
        assert np.isnan(out[0])
        assert out[1] == pytest.approx(math.log(2))

    def test_log_return_rejects_non_positive(self, start):
        with pytest.raises(DataError, match="strictly positive"):
            log_return(series_from_values("y", start, [1.0, 0.0]))

    def test_realized_vol_squares(self, start):
        rv = realized_vol(series_from_values("r", start, [0.1, None, -0.2]))
        assert rv.name == "r_rv"
        assert rv.values[0] == pytest.approx(0.01)
        assert rv.values[1] is None
        assert rv.values[2] == pytest.approx(0.04)

    def test_parkinson_known_value(self):
        quote = DailyQuote(date(1850, 1, 2), high=math.exp(0.1) * 100.0, low=100.0, close=100.0)
        assert parkinson_intraday(quote) == pytest.approx(0.00361, abs=1e-12)

    def test_parkinson_constant_against_closed_form(self):
        assert PARKINSON_CONSTANT == pytest.approx(1.0 / (4.0 * math.log(2.0)), abs=1e-3)

    @pytest.mark.parametrize("zeros, expected", [(0, 1.0), (3, 0.75), (12, 0.0)])
    def test_liquidity(self, zeros, expected):
        returns = [0.0] * zeros + [0.01] * (12 - zeros)
        assert liquidity(returns) == expected

    def test_liquidity_counts_missing_as_zero(self):
        assert liquidity([np.nan] * 6 + [0.01] * 6) == 0.5

    def test_liquidity_needs_twelve_months(self):
        with pytest.raises(DataError):
            liquidity([0.01] * 11)

    def test_annual_liquidity_complete_years_only(self):
        s = MonthlySeries.from_array("r", MonthIndex(1820, 6), [0.0] * 7 + [0.01] * 12 + [0.0] * 3)
        assert annual_liquidity(s) == {1821: 1.0}

    def test_spread_on_overlap(self, start):
        a = series_from_values("yield", start, [5.0, 5.5, 6.0])
        b = series_from_values("benchmark", start.shift(1), [3.0, 3.0, 3.0])
        s = spread(a, b)
        assert s.start == start.shift(1)
        assert s.values == (2.5, 3.0)

    def test_spread_without_overlap(self, start):
        a = series_from_values("a", start, [5.0])
        b = series_from_values("b", start.shift(3), [3.0])
        with pytest.raises(DataError, match="overlap"):
            spread(a, b)


class TestDistance:
    def test_versts_to_km(self):
        assert versts_to_km(852.2) == pytest.approx(909.13, abs=0.01)

    def test_negative_versts(self):
        with pytest.raises(DataError):
            versts_to_km(-1.0)

    def test_distance_feature_prefers_km(self, catalog):
        e1, e2 = catalog.records[0], catalog.records[1]
        assert distance_feature(e1) == pytest.approx(909.13, abs=0.01)
        assert distance_feature(e2) == 100.0
        assert distance_feature(e2, "log_km") == pytest.approx(math.log(100.0))

    def test_distance_feature_unknown_mode(self, catalog):
        with pytest.raises(DataError, match="unknown distance mode"):
            distance_feature(catalog.records[0], "miles")

    def test_distance_feature_missing(self, catalog):
        with pytest.raises(DataError, match="neither"):
            distance_feature(catalog.records[2])


class TestEventFeatures:
    def test_event_dummies_cover_duration(self, catalog, start):
        d = event_dummies(catalog, start, start.shift(239), EventFilter.parse("kind=collective"), "collective")
        values = d.to_array()
        assert values.sum() == 3
        assert values[100] == values[101] == values[200] == 1

    def test_event_dummies_clip_to_range(self, catalog, start):
        d = event_dummies(catalog, start.shift(101), start.shift(105), EventFilter.parse("kind=external"))
        assert d.values == (1.0, 1.0, 1.0, 0.0, 0.0)

    def test_empty_range(self, catalog, start):
        with pytest.raises(DataError, match="empty month range"):
            event_dummies(catalog, start.shift(5), start)

    def test_cumulative_count(self, start):
        dummy = series_from_values("d", start, [1, 0, 1, 1, 0, 1])
        counts = cumulative_count(dummy, window=3)
        assert counts.name == "d_count"
        assert counts.values == (1.0, 0.0, 2.0, 2.0, 0.0, 2.0)

    def test_cumulative_count_interpretation(self, start):
        dummy = series_from_values("d", start, [1] * 12)
        max_count = max(cumulative_count(dummy, window=12).values)
        assert max_count == 12
        assert 0.012 * max_count == pytest.approx(0.144)

    def test_cumulative_count_gap_propagates(self, start):
        counts = cumulative_count(series_from_values("d", start, [1, None, 1, 1]), window=2)
        assert counts.values == (1.0, None, None, 2.0)

    def test_cumulative_count_is_zero_outside_event_months(self, start):
        counts = cumulative_count(series_from_values("d", start, [1, None, 0, 1]), window=3)
        assert counts.values == (1.0, None, 0.0, None)

    def test_cumulative_count_matches_brute_force(self, start, rng):
        values = rng.integers(0, 2, 80).astype(float)
        counts = cumulative_count(MonthlySeries.from_array("d", start, values), window=12).to_array()
        expected = [values[max(t - 11, 0):t + 1].sum() if values[t] == 1 else 0.0 for t in range(80)]
        np.testing.assert_array_equal(counts, expected)

    def test_event_dummies_match_brute_force(self, catalog, start):
        last = start.shift(239)
        event_filter = EventFilter.parse("kind=collective,external")
        d = event_dummies(catalog, start, last, event_filter)
        expected = [
            1.0 if any(event_filter.matches(r) and r.is_active(m) for r in catalog) else 0.0
            for m in month_range(start, last)
        ]
        assert list(d.values) == expected

    def test_event_dummies_unchanged_by_duplicated_catalog(self, catalog, start):
        last = start.shift(239)
        assert event_dummies(catalog.union(catalog), start, last) == event_dummies(catalog, start, last)

    def test_cumulative_count_needs_binary(self, start):
        with pytest.raises(DataError, match="0/1"):
            cumulative_count(series_from_values("d", start, [2, 0]))

    def test_multiple_events(self, catalog, start):
        d = multiple_events_dummy(catalog, start, start.shift(239))
        assert d.name == "multiple_events"
        assert np.flatnonzero(d.to_array()).tolist() == [101]

    def test_interaction(self, catalog, start):
        d = interaction_dummy(EventFilter.parse("kind=collective"), catalog, start, start.shift(239), "x")
        assert np.flatnonzero(d.to_array()).tolist() == [101]
        e = interaction_dummy(EventFilter.parse("kind=attempted_assassination"), catalog, start, start.shift(239))
        assert e.to_array().sum() == 0

    def test_selection_indicator_is_located_events(self, catalog, start):
        s = selection_indicator(catalog, start, start.shift(239))
        assert np.flatnonzero(s.to_array()).tolist() == [100, 101, 150, 200]

    def test_located_distance(self, catalog, start):
        d = located_distance_series(catalog, start, start.shift(239))
        assert d.name == "distance"
        assert d.get(start.shift(100)) == pytest.approx(909.13, abs=0.01)
        assert d.get(start.shift(150)) == 100.0
        assert d.get(start.shift(102)) is None
        logged = located_distance_series(catalog, start, start.shift(239), "log_km")
        assert logged.get(start.shift(200)) == pytest.approx(math.log(2000.0))

    def test_attribute_series(self, catalog, start):
        s = event_attribute_series(catalog, start, start.shift(239), "oblast_size_km2")
        assert s.get(start.shift(101)) == 50000.0
        assert s.get(start.shift(200)) is None


class TestLagsAndFilters:
    def test_lag_and_lead(self, start):
        s = series_from_values("x", start, [1, 2, 3, 4])
        assert lag(s, 1).values == (None, 1.0, 2.0, 3.0)
        assert lag(s, 1).name == "x_lag1"
        assert lead(s, 2).values == (3.0, 4.0, None, None)

    def test_lead_inverts_lag_on_overlap(self, start):
        s = series_from_values("x", start, [1, 2, 3, 4, 5])
        assert lead(lag(s, 2), 2).values[:3] == s.values[:3]

    def test_lag_must_be_positive(self, start):
        with pytest.raises(DataError):
            lag(series_from_values("x", start, [1, 2]), 0)

    def test_bk_weights_sum_to_zero_and_symmetric(self):
        w = baxter_king_weights(2, 8, 3)
        assert len(w) == 7
        assert w.sum() == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(w, w[::-1])

    def test_bk_weights_raw_central_value(self):
        w = baxter_king_weights(2, 8, 3)
        side = [(math.sin(math.pi * j) - math.sin(math.pi / 4 * j)) / (math.pi * j) for j in (1, 2, 3)]
        raw_center = (math.pi - math.pi / 4) / math.pi
        mean = (raw_center + 2 * sum(side)) / 7
        assert w[3] == pytest.approx(raw_center - mean)

    def test_bk_filter_matches_weights(self, start, rng):
        values = rng.normal(size=60).cumsum()
        s = MonthlySeries.from_array("x", start, values)
        filtered = baxter_king(s, 2, 8, 3).to_array()
        expected = np.convolve(values, baxter_king_weights(2, 8, 3), mode="valid")
        assert np.isnan(filtered[:3]).all() and np.isnan(filtered[-3:]).all()
        np.testing.assert_allclose(filtered[3:-3], expected, rtol=1e-10, atol=1e-12)

    def test_bk_gain_passes_band_and_blocks_outside(self):
        K = 36
        w = baxter_king_weights(6, 32, K)
        lags = np.arange(-K, K + 1)

        def gain(period):
            return float(np.sum(w * np.cos(lags * 2.0 * np.pi / period)))

        for period in (10, 12, 16):
            assert gain(period) == pytest.approx(1.0, abs=0.05)
        for period in (3, 120):
            assert abs(gain(period)) < 0.1

    def test_bk_removes_linear_trend(self, start):
        s = MonthlySeries.from_array("x", start, np.arange(40, dtype=float))
        filtered = baxter_king(s, 2, 8, 3).to_array()[3:-3]
        np.testing.assert_allclose(filtered, 0.0, atol=1e-10)

    def test_bk_rejects_gaps_and_bad_band(self, start):
        with pytest.raises(DataError, match="gaps"):
            baxter_king(series_from_values("x", start, [1.0] * 10 + [None]), 2, 8, 3)
        with pytest.raises(DataError):
            baxter_king_weights(8, 2, 3)
