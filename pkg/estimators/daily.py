"""Single-event daily studies against a historical mean."""

from datetime import date

import numpy as np
from scipy import stats

from models import DailyQuoteSeries, DailyStudyResult, DailyStudyRow, DataError
from transforms import log_return, parkinson_series

HISTORY_CLOSES = (-30, -20)
WINDOWS = ((-1, 1), (-3, 3), (-5, 5))
HISTORY_LENGTH = 250
MEASURES = ("return", "realized_vol", "intraday_vol")


def daily_measures(daily: DailyQuoteSeries) -> dict[str, np.ndarray]:
    """
    Per-day measures in percent units.

    ``return`` is 100 * ln(close_t / close_{t-1}) (missing on the first day),
    ``realized_vol`` its square and ``intraday_vol`` the range-based variance
    of 100 * ln(high / low).
    """
    returns = 100.0 * log_return(daily.closes(), daily.name)
    return {
        "return": returns,
        "realized_vol": np.square(returns),
        "intraday_vol": 100.0 ** 2 * parkinson_series(daily.highs(), daily.lows()),
    }


def _mean_difference(window: np.ndarray, history: np.ndarray) -> tuple[float, float, float]:
    """Window mean minus history mean, tested against the historical distribution."""
    delta = float(window.mean() - history.mean())
    if np.ptp(history) == 0:
        if delta == 0:
            return delta, 0.0, 1.0
        return delta, float(np.sign(delta) * np.inf), 0.0
    # ttest_1samp tests history against the window mean, so its sign is flipped.
    test = stats.ttest_1samp(history, window.mean())
    return delta, -float(test.statistic), float(test.pvalue)


def daily_hmm_study(daily: DailyQuoteSeries, event_date: date,
                    history_closes=HISTORY_CLOSES, windows=WINDOWS,
                    history_length: int = HISTORY_LENGTH) -> DailyStudyResult:
    """
    Historical-mean event study on daily quotes.

    The event day is the first trading day on or after ``event_date``. For
    each history close c the history is the ``history_length`` trading days
    ending c days before the event day. Each window mean is tested against
    the history by a two-sided one-sample t-test of the history at the
    window mean (history_length - 1 df), signed window minus history.
    """
    event = daily.position_on_or_after(event_date)
    measures = daily_measures(daily)
    for lo, hi in windows:
        if not lo <= 0 <= hi:
            raise DataError(f"event window must contain day 0, got ({lo}, {hi})")
        if event + lo < 1 or event + hi >= len(daily):
            raise DataError(f"window ({lo}, {hi}) around {event_date} exceeds the daily data")

    rows = []
    for close in history_closes:
        if close >= min(lo for lo, _ in windows):
            raise DataError(f"history must close before every event window opens, got close {close}")
        last = event + close
        first = last - history_length + 1
        if first < 1:
            raise DataError(
                f"{event_date} has {max(last, 0)} usable trading days before day {close}, {history_length} are needed"
            )
        for lo, hi in windows:
            for measure in MEASURES:
                values = measures[measure]
                delta, t, p = _mean_difference(values[event + lo:event + hi + 1], values[first:last + 1])
                rows.append(DailyStudyRow(close, (lo, hi), measure, delta, t, p))
    return DailyStudyResult(event_date=event_date, rows=tuple(rows))
