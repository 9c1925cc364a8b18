"""Seeded Monte Carlo replications and event-study rejection rates."""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from estimators import run_event_study
from models import BaselineModel, EventStudySpec, MonthIndex, MonthlySeries

ALPHAS = (0.01, 0.05, 0.10)


def run_replications(fn: Callable[[np.random.Generator], object], n: int, seed: int, n_jobs: int = 1) -> list:
    """
    Call ``fn(rng)`` ``n`` times, each with its own generator spawned from
    ``seed``. Results come back in replication order whatever ``n_jobs`` is.
    """
    children = np.random.SeedSequence(seed).spawn(n)
    with ThreadPoolExecutor(max_workers=max(1, n_jobs)) as executor:
        return list(executor.map(lambda child: fn(np.random.default_rng(child)), children))


def rejection_rates(p_values: Sequence[float], alphas: Sequence[float] = ALPHAS) -> dict[float, float]:
    p = np.asarray(p_values, dtype=float)
    return {alpha: float(np.mean(p < alpha)) for alpha in alphas}


def event_study_replication(rng: np.random.Generator, spec: EventStudySpec, n_events: int,
                            effect: float = 0.0, scale: float = 1.0) -> dict:
    """
    One synthetic study: iid normal returns with ``n_events`` events on
    disjoint blocks, ``effect`` added to every event-window month.
    """
    block = spec.estimation_window_length + spec.window_length
    values = rng.normal(0.0, scale, n_events * block)
    start = MonthIndex(1800, 1)
    months = []
    for k in range(n_events):
        window_start = k * block + spec.estimation_window_length
        values[window_start:window_start + spec.window_length] += effect
        months.append(start.shift(window_start - spec.pre))
    returns = MonthlySeries.from_array("returns", start, values)
    result = run_event_study(returns, months, spec)
    return {
        "caar": result.caar,
        "p": {name: test.p_value for name, test in result.tests.items()},
    }


def event_study_monte_carlo(replications: int, seed: int, n_events: int = 30,
                            spec: EventStudySpec = EventStudySpec(BaselineModel.CONSTANT_MEAN),
                            effect: float = 0.0, scale: float = 1.0, n_jobs: int = 1) -> dict:
    """
    Rejection rates of each test and the mean CAAR over ``replications``
    synthetic studies. With ``effect`` 0 the rates estimate test size.
    """
    runs = run_replications(lambda rng: event_study_replication(rng, spec, n_events, effect, scale),
                            replications, seed, n_jobs)
    tests = sorted(runs[0]["p"]) if runs else []
    return {
        "rates": {test: rejection_rates([r["p"][test] for r in runs]) for test in tests},
        "mean_caar": float(np.mean([r["caar"] for r in runs])) if runs else float("nan"),
        "caars": np.array([r["caar"] for r in runs]),
        "replications": replications,
    }
