"""
Monthly multi-event studies.

Abnormal returns come from one of two mean-based baselines. ``raw_returns``
subtracts the full-sample mean; ``constant_mean`` subtracts the mean of each
event's own estimation window, the ``estimation_window_length`` months right
before the event window opens. Under ``raw_returns`` the estimation window
is the same stretch of months (shortened at the series start), used only to
scale the abnormal returns.
"""

import warnings
from itertools import combinations
from typing import Iterable

import numpy as np
from scipy import stats

from models import (
    BaselineModel,
    DataError,
    DroppedEventsWarning,
    EventSample,
    EventStudyResult,
    EventStudySpec,
    EventTest,
    MonthIndex,
    MonthlySeries,
    TestStatistic,
)

# Patell standardization needs (L-1)/(L-3) to exist.
MIN_ESTIMATION_MONTHS = 4
MIN_GRANKT_LENGTH = 10


def _event_window(returns: MonthlySeries, month: MonthIndex, spec: EventStudySpec) -> tuple[int, int]:
    lo = returns.start.months_until(month) + spec.pre
    hi = returns.start.months_until(month) + spec.post
    if lo < 0 or hi >= len(returns):
        raise DataError(
            f"event window [{spec.pre},{spec.post}] around {month} exceeds the data ({returns.start}..{returns.end})"
        )
    return lo, hi


def _samples(returns: MonthlySeries, event_months: Iterable[MonthIndex], spec: EventStudySpec,
             model: BaselineModel) -> list[EventSample]:
    values = returns.to_array()
    months = returns.months()
    full_mean = float(np.nanmean(values)) if model is BaselineModel.RAW_RETURNS else None
    length = spec.estimation_window_length
    samples = []
    for month in event_months:
        lo, hi = _event_window(returns, month, spec)
        est_lo = lo - length
        if model is BaselineModel.CONSTANT_MEAN:
            if est_lo < 0:
                raise DataError(
                    f"event {month} has {lo} months of pre-event history, the constant-mean model needs {length}"
                )
            estimation = values[est_lo:lo]
            baseline = np.mean(estimation)
        else:
            est_lo = max(est_lo, 0)
            if lo - est_lo < MIN_ESTIMATION_MONTHS:
                raise DataError(
                    f"event {month} has {lo - est_lo} months before its window, at least {MIN_ESTIMATION_MONTHS} are needed"
                )
            estimation = values[est_lo:lo]
            baseline = full_mean
        samples.append(EventSample(
            event_month=month,
            event_ar=values[lo:hi + 1] - baseline,
            estimation_ar=estimation - baseline,
            estimation_months=tuple(months[est_lo:lo]),
        ))
    return samples


def abnormal_returns_raw(returns: MonthlySeries, event_months: Iterable[MonthIndex],
                         spec: EventStudySpec = EventStudySpec(BaselineModel.RAW_RETURNS)) -> list[EventSample]:
    """AR_t = R_t - mean of R over the full sample."""
    return _samples(returns, event_months, spec, BaselineModel.RAW_RETURNS)


def abnormal_returns_constant_mean(returns: MonthlySeries, event_months: Iterable[MonthIndex],
                                   spec: EventStudySpec = EventStudySpec()) -> list[EventSample]:
    """AR_t = R_t - mean of R over the event's own pre-event estimation window."""
    return _samples(returns, event_months, spec, BaselineModel.CONSTANT_MEAN)


def abnormal_returns(returns: MonthlySeries, event_months: Iterable[MonthIndex],
                     spec: EventStudySpec) -> list[EventSample]:
    """
    Samples for every event under ``spec.baseline_model``.

    Events whose event or estimation window touches a missing return are
    dropped with a DroppedEventsWarning.
    """
    samples = _samples(returns, event_months, spec, spec.baseline_model)
    kept = [s for s in samples if not s.has_missing]
    dropped = [str(s.event_month) for s in samples if s.has_missing]
    if dropped:
        warnings.warn(
            f"dropped {len(dropped)} event(s) with missing returns in their windows: {', '.join(dropped)}",
            DroppedEventsWarning,
            stacklevel=2,
        )
    return kept


def _residual_sd(sample: EventSample) -> float:
    sd = float(np.std(sample.estimation_ar, ddof=1))
    if not sd > 0:
        raise DataError(f"event {sample.event_month} has zero estimation-window residual SD")
    return sd


def _car_scale(sample: EventSample, spec: EventStudySpec) -> float:
    """Standard deviation of the CAR implied by the estimation window."""
    w = spec.window_length
    length = len(sample.estimation_ar)
    if spec.baseline_model is BaselineModel.CONSTANT_MEAN:
        return _residual_sd(sample) * np.sqrt(w * (1.0 + w / length))
    return _residual_sd(sample) * np.sqrt(w)


def standardized_cars(samples: list[EventSample], spec: EventStudySpec) -> np.ndarray:
    return np.array([s.car / _car_scale(s, spec) for s in samples])


def average_cross_correlation(samples: list[EventSample]) -> float:
    """
    Mean pairwise correlation of estimation-window residuals.

    Each pair is correlated over the calendar months their estimation windows
    share, weighted by the shared fraction of the windows. Pairs with disjoint
    windows contribute 0.
    """
    if len(samples) < 2:
        return 0.0
    total = 0.0
    pairs = 0
    for a, b in combinations(samples, 2):
        pairs += 1
        shared = sorted(set(a.estimation_months) & set(b.estimation_months))
        if len(shared) < 3:
            continue
        pos_a = {m: i for i, m in enumerate(a.estimation_months)}
        pos_b = {m: i for i, m in enumerate(b.estimation_months)}
        x = np.array([a.estimation_ar[pos_a[m]] for m in shared])
        y = np.array([b.estimation_ar[pos_b[m]] for m in shared])
        if np.std(x) == 0 or np.std(y) == 0:
            continue
        weight = len(shared) / np.sqrt(len(a.estimation_months) * len(b.estimation_months))
        total += float(np.corrcoef(x, y)[0, 1]) * weight
    return total / pairs


def patell_adjusted_test(scars: np.ndarray, estimation_lengths: np.ndarray,
                         avg_correlation: float = 0.0) -> TestStatistic:
    """
    Patell Z on standardized CARs with the cross-correlation adjustment
    sqrt((1 - r) / (1 + (n - 1) r)). With r = 0 this is the classic Patell Z.
    """
    scars = np.asarray(scars, dtype=float)
    lengths = np.asarray(estimation_lengths, dtype=float)
    n = len(scars)
    if n == 0:
        raise DataError("Patell test needs at least one event")
    if np.any(lengths <= 3):
        raise DataError("Patell test needs estimation windows longer than 3 months")
    z = scars.sum() / np.sqrt(np.sum((lengths - 1) / (lengths - 3)))
    r = float(avg_correlation)
    factor = 1.0 + (n - 1) * r
    if factor <= 0 or r >= 1:
        raise DataError(f"average cross-correlation {r:.4f} leaves the adjusted Patell test undefined for n={n}")
    z *= np.sqrt((1.0 - r) / factor)
    return TestStatistic(EventTest.PATELL_ADJUSTED.value, float(z), float(2 * stats.norm.sf(abs(z))))


def grankt_test(samples: list[EventSample], spec: EventStudySpec) -> TestStatistic:
    """
    Generalized rank t-test.

    Estimation-window ARs are standardized by their SD, the event CAR by the
    CAR scale and then again by its cross-sectional SD. Ranks (mid-ranks on
    ties) of the combined series are scaled to U = rank / (T + 1) - 1/2, with
    the event slot last; the statistic is t-distributed with T - 2 df.
    """
    if not samples:
        raise DataError("GRANKT needs at least one event")
    scars = standardized_cars(samples, spec)
    if len(scars) > 1:
        cross_sd = np.std(scars, ddof=1)
        if cross_sd > 0:
            scars = scars / cross_sd

    length = max(len(s.estimation_ar) for s in samples) + 1
    if length < MIN_GRANKT_LENGTH:
        raise DataError(f"GRANKT needs at least {MIN_GRANKT_LENGTH} months of estimation plus event, got {length}")

    # Rows are events, columns relative time aligned on the event slot (last column).
    u = np.full((len(samples), length), np.nan)
    for i, (sample, scar) in enumerate(zip(samples, scars)):
        gsar = np.append(sample.estimation_ar / _residual_sd(sample), scar)
        t_i = len(gsar)
        u[i, length - t_i:] = stats.rankdata(gsar) / (t_i + 1) - 0.5

    present = ~np.isnan(u)
    n_t = present.sum(axis=0)
    u_bar = np.where(n_t > 0, np.nansum(u, axis=0) / np.maximum(n_t, 1), 0.0)
    n = len(samples)
    s_u = np.sqrt(np.sum(n_t / n * u_bar ** 2) / length)
    if not s_u > 0:
        raise DataError("GRANKT is undefined: every rank is tied")
    z = u_bar[-1] / s_u
    df = length - 2
    denominator = length - 1 - z ** 2
    if denominator <= 0:
        t = np.sign(z) * np.inf
        p = 0.0
    else:
        t = z * np.sqrt((length - 2) / denominator)
        p = 2 * stats.t.sf(abs(t), df)
    return TestStatistic(EventTest.GRANKT.value, float(t), float(p), df=df)


def caar(samples: list[EventSample], spec: EventStudySpec, label: str = "") -> EventStudyResult:
    """CARs per event, their mean, and the tests requested in ``spec``."""
    if not samples:
        raise DataError(f"no events to study{f' for {label}' if label else ''}")
    ars = np.vstack([s.event_ar for s in samples])
    cars = ars.sum(axis=1)
    tests = {}
    if EventTest.PATELL_ADJUSTED in spec.tests:
        tests[EventTest.PATELL_ADJUSTED.value] = patell_adjusted_test(
            standardized_cars(samples, spec),
            np.array([len(s.estimation_ar) for s in samples]),
            average_cross_correlation(samples),
        )
    if EventTest.GRANKT in spec.tests:
        tests[EventTest.GRANKT.value] = grankt_test(samples, spec)
    return EventStudyResult(
        label=label,
        spec=spec,
        event_months=tuple(s.event_month for s in samples),
        ars=ars,
        cars=cars,
        caar=float(cars.mean()),
        tests=tests,
    )


def run_event_study(returns: MonthlySeries, event_months: Iterable[MonthIndex], spec: EventStudySpec,
                    label: str = "") -> EventStudyResult:
    """Abnormal returns, CARs and tests for one set of event months."""
    return caar(abnormal_returns(returns, list(event_months), spec), spec, label)


def events_with_history(returns: MonthlySeries, event_months: Iterable[MonthIndex],
                        spec: EventStudySpec) -> tuple[list[MonthIndex], list[MonthIndex]]:
    """
    Split event months into those whose windows fit the series under
    ``spec`` and those too close to either end. Duplicates are removed.
    """
    needed = spec.estimation_window_length if spec.baseline_model is BaselineModel.CONSTANT_MEAN else MIN_ESTIMATION_MONTHS
    kept, skipped = [], []
    for month in sorted(set(event_months)):
        lo = returns.start.months_until(month) + spec.pre
        hi = returns.start.months_until(month) + spec.post
        if lo - needed < 0 or hi >= len(returns):
            skipped.append(month)
        else:
            kept.append(month)
    return kept, skipped
