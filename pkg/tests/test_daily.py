"""Tests for the daily historical-mean event study."""

from datetime import timedelta

import numpy as np
import pytest
from scipy import stats

from estimators import HISTORY_LENGTH, MEASURES, daily_hmm_study, daily_measures
from models import DataError

from conftest import make_daily


@pytest.fixture
def walk(rng):
    """400 weekdays of a 0.5%-vol random walk."""
    return 100.0 * np.exp(np.cumsum(rng.normal(0.0, 0.005, 400)))


class TestDailyMeasures:
    def test_percent_units(self):
        daily = make_daily(3, closes=[100.0, 101.0, 100.0])
        measures = daily_measures(daily)
        assert np.isnan(measures["return"][0])
        assert measures["return"][1] == pytest.approx(100 * np.log(1.01))
        assert measures["realized_vol"][1] == pytest.approx((100 * np.log(1.01)) ** 2)
        band = 100 * np.log(1.005 / 0.995)
        np.testing.assert_allclose(measures["intraday_vol"], 0.361 * band ** 2)


class TestDailyStudy:
    def test_grid_shape(self, walk):
        daily = make_daily(400, closes=walk)
        result = daily_hmm_study(daily, daily.dates()[350])
        assert len(result.rows) == 2 * 3 * len(MEASURES)
        assert {row.history_close for row in result.rows} == {-30, -20}
        assert HISTORY_LENGTH == 250

    def test_jump_on_event_day_is_significant(self, walk):
        closes = walk.copy()
        closes[350:] *= 1.05
        daily = make_daily(400, closes=closes)
        result = daily_hmm_study(daily, daily.dates()[350])
        cell = result.cell(-30, (-1, 1), "return")
        assert cell.delta == pytest.approx(100 * np.log(1.05) / 3, abs=1.0)
        assert cell.p_value < 0.01
        assert cell.stars == "***"
        assert result.cell(-20, (-5, 5), "realized_vol").delta > 0

    def test_three_sd_spike_is_significant_in_narrow_window(self, walk):
        returns = daily_measures(make_daily(400, closes=walk))["return"]
        # history for close -30 covers return slots 71..320 with the event on 350
        sd = np.std(returns[71:321], ddof=1) / 100.0
        steps = np.diff(np.log(walk))
        steps[348:351] = 0.0
        steps[349] = 3.0 * sd
        closes = walk[0] * np.exp(np.concatenate([[0.0], np.cumsum(steps)]))
        daily = make_daily(400, closes=closes)
        result = daily_hmm_study(daily, daily.dates()[350])
        for close in (-30, -20):
            cell = result.cell(close, (-1, 1), "return")
            assert cell.statistic > 0
            assert cell.p_value < 0.01

    def test_statistic_is_one_sample_t_of_history(self, walk):
        daily = make_daily(400, closes=walk)
        result = daily_hmm_study(daily, daily.dates()[350])
        returns = daily_measures(daily)["return"]
        window, history = returns[347:354], returns[71:321]
        expected = (window.mean() - history.mean()) / (np.std(history, ddof=1) / np.sqrt(250))
        cell = result.cell(-30, (-3, 3), "return")
        assert cell.statistic == pytest.approx(expected)
        assert cell.p_value == pytest.approx(2 * stats.t.sf(abs(expected), 249))

    def test_flat_prices_give_zero_statistic(self):
        daily = make_daily(400)
        result = daily_hmm_study(daily, daily.dates()[350])
        cell = result.cell(-30, (-3, 3), "return")
        assert (cell.delta, cell.statistic, cell.p_value) == (0.0, 0.0, 1.0)

    def test_weekend_event_date_moves_to_next_trading_day(self, walk):
        daily = make_daily(400, closes=walk)
        friday = next(d for d in daily.dates()[340:] if d.weekday() == 4)
        saturday = friday + timedelta(days=1)
        on_saturday = daily_hmm_study(daily, saturday)
        on_monday = daily_hmm_study(daily, friday + timedelta(days=3))
        assert on_saturday.rows == on_monday.rows

    def test_window_must_contain_event_day(self, walk):
        daily = make_daily(400, closes=walk)
        with pytest.raises(DataError, match="contain day 0"):
            daily_hmm_study(daily, daily.dates()[350], windows=((1, 3),))

    def test_window_past_data(self, walk):
        daily = make_daily(400, closes=walk)
        with pytest.raises(DataError, match="exceeds"):
            daily_hmm_study(daily, daily.dates()[397])

    def test_history_must_close_before_window(self, walk):
        daily = make_daily(400, closes=walk)
        with pytest.raises(DataError, match="close before"):
            daily_hmm_study(daily, daily.dates()[350], history_closes=(-3,))

    def test_not_enough_history(self, walk):
        daily = make_daily(400, closes=walk)
        with pytest.raises(DataError, match="usable trading days"):
            daily_hmm_study(daily, daily.dates()[200])
