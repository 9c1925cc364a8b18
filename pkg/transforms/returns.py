"""Return, volatility, spread and liquidity transforms."""

from typing import Optional, Union

import numpy as np

from models import DailyQuote, DataError, MonthIndex, MonthlySeries, overlap

# Range-based variance constant, used as published (1 / (4 ln 2) = 0.36067...).
PARKINSON_CONSTANT = 0.361


def _log_return_array(values: np.ndarray, label: str) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    present = values[~np.isnan(values)]
    if np.any(present <= 0):
        raise DataError(f"log returns need strictly positive values in '{label}', found {present[present <= 0][0]}")
    out = np.full(values.shape, np.nan)
    if values.size > 1:
        out[1:] = np.log(values[1:] / values[:-1])
    return out


def log_return(s: Union[MonthlySeries, np.ndarray, list], name: Optional[str] = None):
    """
    R_t = ln(value_t / value_{t-1}).

    The first slot and any slot next to a gap are missing. Accepts a
    MonthlySeries (returns one) or a plain sequence of daily closes (returns
    an array of the same length).
    """
    if isinstance(s, MonthlySeries):
        return s.with_values(_log_return_array(s.to_array(), s.name), name=name or f"{s.name}_return")
    return _log_return_array(np.asarray(s, dtype=float), name or "closes")


def realized_vol(returns: Union[MonthlySeries, np.ndarray], name: Optional[str] = None):
    """Squared returns; gaps propagate."""
    if isinstance(returns, MonthlySeries):
        return returns.with_values(np.square(returns.to_array()), name=name or f"{returns.name}_rv")
    return np.square(np.asarray(returns, dtype=float))


def parkinson_intraday(q: DailyQuote) -> float:
    """0.361 * ln(high / low)^2."""
    return PARKINSON_CONSTANT * np.log(q.high / q.low) ** 2


def parkinson_series(highs: np.ndarray, lows: np.ndarray) -> np.ndarray:
    return PARKINSON_CONSTANT * np.log(np.asarray(highs, dtype=float) / np.asarray(lows, dtype=float)) ** 2


def liquidity(monthly_returns_of_year) -> float:
    """
    Share of the year's 12 months with a nonzero return.

    Missing months count as zero-return months.
    """
    values = np.asarray(monthly_returns_of_year, dtype=float)
    if values.shape != (12,):
        raise DataError(f"liquidity needs exactly 12 monthly returns, got {values.size}")
    zero = np.isnan(values) | (values == 0)
    return 1.0 - zero.sum() / 12.0


def annual_liquidity(returns: MonthlySeries) -> dict[int, float]:
    """Liquidity for every calendar year the series covers completely."""
    out = {}
    for year in range(returns.start.year, returns.end.year + 1):
        first, last = MonthIndex(year, 1), MonthIndex(year, 12)
        if returns.covers(first) and returns.covers(last):
            out[year] = liquidity(returns.window(first, last).to_array())
    return out


def spread(russian_yield: MonthlySeries, benchmark_yield: MonthlySeries, name: str = "spread") -> MonthlySeries:
    """Yield minus benchmark in percentage points, over the common months."""
    common = overlap(russian_yield, benchmark_yield)
    if common is None:
        raise DataError(f"'{russian_yield.name}' and '{benchmark_yield.name}' do not overlap")
    first, last = common
    a = russian_yield.window(first, last).to_array()
    b = benchmark_yield.window(first, last).to_array()
    return MonthlySeries.from_array(name, first, a - b)
