"""
Synthetic workspaces with known truth.

The monthly world: control columns, a probit selection process that decides
which months see a located unrest event, external conflicts drawn
independently, and yields from an ACGARCH-M model whose mean loads on the
imperial-unrest dummy. A daily series carries a return spike on a recorded
event date. The manifest keeps every parameter the draws came from.
"""

from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from estimators import HISTORY_LENGTH, simulate
from models import (
    AcgarchParams,
    AcgarchSpec,
    DailyQuote,
    DailyQuoteSeries,
    DataError,
    DesignMatrix,
    EventCatalog,
    EventFilter,
    EventRecord,
    MonthIndex,
    MonthlySeries,
    Role,
)
from readers import write_daily_csv, write_event_csv, write_monthly_csv
from transforms import VERST_KM, event_dummies

from .config import Config
from .workspace import save_json

BASE_YIELD = 4.5
BENCHMARK_YIELD = 3.2
DAILY_VOL = 0.005
# Located events: kind mix and the homeland share.
KIND_WEIGHTS = {"collective": 0.6, "attempted_assassination": 0.2, "successful_assassination": 0.2}
HOMELAND_SHARE = 0.45
IMPERIAL_TAGS = ("ukraine", "other_imperial", "caucasus_rebellion")
EXTERNAL_RATE = 0.08
UNREST_COLUMN = "unrest_imperial"
UNREST_FILTER = "kind=collective; location=imperial; exclude=caucasus_rebellion,caucasus_war"

SELECTION_TRUTH = {"const": -1.0, "drought": 0.8, "serfdom": 0.3, "cereals": -0.4}
DISTANCE_TRUTH = {"const": 150.0, "oblast_size_km2": 0.008, "density_per_km2": -5.0, "lost_war": 400.0, "noise_sd": 150.0}


@dataclass(frozen=True)
class SimulationSettings:
    seed: int
    start: MonthIndex = MonthIndex(1820, 1)
    months: int = 1140
    daily_days: int = 600
    event_effect: float = 0.02
    size_replications: int = 0
    size_events: int = 30
    n_jobs: int = 1

    def __post_init__(self):
        if self.months < 200:
            raise DataError(f"simulation needs at least 200 months, got {self.months}")
        minimum_days = HISTORY_LENGTH + 30 + 12
        if self.daily_days and self.daily_days < minimum_days:
            raise DataError(f"daily simulation needs at least {minimum_days} days, got {self.daily_days}")

    @classmethod
    def from_config(cls, config: Config, seed: Optional[int] = None) -> "SimulationSettings":
        if seed is None:
            text = config.get("simulate", "seed")
            if not text:
                raise DataError("simulation needs a seed: pass --seed or set [simulate] seed")
            seed = config.get_int("simulate", "seed")
        return cls(
            seed=seed,
            start=config.get_month("simulate", "start"),
            months=config.get_int("simulate", "months"),
            daily_days=config.get_int("simulate", "daily_days"),
            event_effect=config.get_float("simulate", "event_effect"),
            size_replications=config.get_int("simulate", "size_replications"),
            size_events=config.get_int("simulate", "size_events"),
            n_jobs=config.get_int("simulate", "n_jobs"),
        )


def garch_truth(event_effect: float) -> tuple[AcgarchSpec, AcgarchParams]:
    """Model and parameters the yield column is drawn from."""
    spec = AcgarchSpec(
        dependent="yield",
        unrest_columns=(UNREST_COLUMN,),
        control_columns=("gold", "drought"),
        shortrun_exog=("drought",),
    )
    phi_lag = 0.95
    omega = 0.01
    delta = 1.0
    params = AcgarchParams(
        mu=BASE_YIELD * (1 - phi_lag) - delta * omega,
        phi_lag=phi_lag,
        # An event lifts the yield level by event_effect in log-return terms.
        beta_unrest=(event_effect * BASE_YIELD,),
        rho_controls=(-0.02, 0.01),
        delta_mean=delta,
        omega=omega,
        rho_q=0.95,
        phi_q=0.03,
        alpha_s=0.08,
        kappa_lev=0.05,
        beta_s=0.7,
        theta2=(0.001,),
        shape=8.0,
    )
    return spec, params


@dataclass
class SyntheticData:
    monthly: dict
    catalog: EventCatalog
    daily: Optional[DailyQuoteSeries]
    manifest: dict = field(default_factory=dict)


def _controls(rng: np.random.Generator, start: MonthIndex, months: int) -> dict[str, np.ndarray]:
    t = np.arange(months)
    years = np.array([start.shift(int(k)).year for k in t])
    first_year = years[0]
    serf_end = min(months - 1, months * 4 // 10)
    gold_start = months * 8 // 10
    interior_by_year = {y: 0.2 + 0.05 * np.sin(2 * np.pi * (y - first_year) / 6) + rng.normal(0, 0.01)
                        for y in np.unique(years)}
    lost_war = np.zeros(months)
    for onset in sorted(rng.choice(np.arange(24, months - 24), size=3, replace=False)):
        lost_war[onset:onset + 24] = 1.0
    cereals = np.zeros(months)
    noise = rng.normal(0, 0.3, months)
    for k in range(1, months):
        cereals[k] = 0.8 * cereals[k - 1] + noise[k]
    tsar = np.zeros(months)
    tsar[sorted(rng.choice(months, size=4, replace=False))] = 1.0
    return {
        "gold": (t >= gold_start).astype(float),
        "drought": (rng.random(months) < 0.1).astype(float),
        "serfdom": (t <= serf_end).astype(float),
        "cereals": cereals,
        "ruble_guilder": 1.6 + np.cumsum(rng.normal(0, 0.01, months)),
        "tsar_transition": tsar,
        "interior": np.array([interior_by_year[y] for y in years]),
        "lost_war": lost_war,
    }


def _events(rng: np.random.Generator, start: MonthIndex, controls: dict[str, np.ndarray]) -> tuple[EventCatalog, np.ndarray]:
    months = len(controls["drought"])
    index = SELECTION_TRUTH["const"] + sum(SELECTION_TRUTH[c] * controls[c] for c in ("drought", "serfdom", "cereals"))
    selected = index + rng.normal(size=months) > 0
    # The first and last months stay quiet so every window fits.
    selected[:2] = False
    selected[-2:] = False

    kinds = list(KIND_WEIGHTS)
    weights = np.array(list(KIND_WEIGHTS.values()))
    records = []
    for k in np.flatnonzero(selected):
        kind = kinds[rng.choice(len(kinds), p=weights)]
        homeland = rng.random() < HOMELAND_SHARE
        size = float(np.exp(rng.normal(11.5, 0.6)))
        density = float(np.exp(rng.normal(3.0, 0.7)))
        km = (DISTANCE_TRUTH["const"] + DISTANCE_TRUTH["oblast_size_km2"] * size
              + DISTANCE_TRUTH["density_per_km2"] * density + DISTANCE_TRUTH["lost_war"] * controls["lost_war"][k]
              + rng.normal(0, DISTANCE_TRUTH["noise_sd"]))
        km = max(km, 5.0)
        if homeland:
            location, tags, distance, versts = "homeland", {"muscovy"}, round(km, 2), None
        else:
            tag = IMPERIAL_TAGS[rng.integers(len(IMPERIAL_TAGS))]
            location, tags, distance, versts = "imperial", {tag}, None, round(km / VERST_KM, 1)
        records.append(EventRecord(
            id=f"U{len(records) + 1:04d}",
            kind=kind,
            location_class=location,
            start=start.shift(int(k)),
            region_tags=frozenset(tags),
            distance_km=distance,
            versts=versts,
            oblast_size_km2=round(size, 1),
            density_per_km2=round(density, 3),
        ))

    for k in np.flatnonzero(rng.random(months) < EXTERNAL_RATE):
        duration = int(rng.integers(1, 5))
        if k < 2 or k + duration > months - 2:
            continue
        tags = {"caucasus_war"} if rng.random() < 0.3 else set()
        records.append(EventRecord(
            id=f"X{len(records) + 1:04d}",
            kind="external",
            location_class="external_border",
            start=start.shift(int(k)),
            duration_months=duration,
            region_tags=frozenset(tags),
        ))
    return EventCatalog(tuple(records)), selected


def _daily(rng: np.random.Generator, days: int) -> tuple[DailyQuoteSeries, date]:
    dates = pd.bdate_range("1904-06-01", periods=days)
    returns = rng.normal(0, DAILY_VOL, days)
    event = days - 40
    returns[event - 1:event + 2] += 3 * DAILY_VOL
    closes = BASE_YIELD * np.exp(np.cumsum(returns))
    up = np.exp(np.abs(rng.normal(0, 0.003, days)))
    down = np.exp(-np.abs(rng.normal(0, 0.003, days)))
    quotes = tuple(
        DailyQuote(d.date(), high=float(c * u), low=float(c * w), close=float(c))
        for d, c, u, w in zip(dates, closes, up, down)
    )
    return DailyQuoteSeries("daily", quotes), dates[event].date()


def simulate_dataset(settings: SimulationSettings) -> SyntheticData:
    """Draw every synthetic input. Same settings, same data."""
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(settings.seed).spawn(5)]
    start, months = settings.start, settings.months
    last = start.shift(months - 1)

    controls = _controls(streams[0], start, months)
    catalog, selected = _events(streams[1], start, controls)

    spec, params = garch_truth(settings.event_effect)
    unrest = event_dummies(catalog, start, last, EventFilter.parse(UNREST_FILTER), UNREST_COLUMN)
    exog = DesignMatrix.from_series([
        (unrest, Role.UNREST),
        (MonthlySeries.from_array("gold", start, controls["gold"]), Role.CONTROL),
        (MonthlySeries.from_array("drought", start, controls["drought"]), Role.CONTROL),
    ])
    garch_seed = int(streams[2].integers(2 ** 31))
    path = simulate(spec, params, months, garch_seed, exog)
    if np.min(path["y"]) <= 0:
        raise DataError("the yield process went non-positive; lower the variance parameters")

    benchmark = np.empty(months)
    level = BENCHMARK_YIELD
    shocks = streams[3].normal(0, 0.02, months)
    for k in range(months):
        level = BENCHMARK_YIELD + 0.97 * (level - BENCHMARK_YIELD) + shocks[k]
        benchmark[k] = level

    monthly = {"yield": MonthlySeries.from_array("yield", start, path["y"]),
               "benchmark": MonthlySeries.from_array("benchmark", start, benchmark)}
    for name, values in controls.items():
        monthly[name] = MonthlySeries.from_array(name, start, values)

    daily, event_date = (None, None)
    if settings.daily_days:
        daily, event_date = _daily(streams[4], settings.daily_days)

    manifest = {
        "seed": settings.seed,
        "start": str(start),
        "months": months,
        "events": len(catalog),
        "located_months": int(selected.sum()),
        "garch": {
            "spec": spec.to_dict(),
            "params": params.as_dict(spec),
            "simulation_seed": garch_seed,
            "floors": path["floors"],
        },
        "event_study": {"filter": UNREST_FILTER, "column": UNREST_COLUMN, "event_effect": settings.event_effect},
        "selection": {"indicator": "selected", "probit": dict(SELECTION_TRUTH)},
        "distance": dict(DISTANCE_TRUTH),
        "daily": {"days": settings.daily_days, "event_date": str(event_date) if event_date else None,
                  "spike_sd": 3.0, "daily_vol": DAILY_VOL},
    }
    return SyntheticData(monthly=monthly, catalog=catalog, daily=daily, manifest=manifest)


RUN_CONFIG = """\
[ingest]
monthly = monthly.csv
events = events.csv
{daily_line}

[features]
yield = yield
benchmark = benchmark
interactions = unrest_imperial
lags = unrest_imperial:1
bk_columns = interior

[eventstudy]
series = yield_return
{eventstudy_extra}

[garch.controls_yield]
dependent = yield
unrest = unrest_imperial
controls = gold, drought
shortrun_exog = drought
multistarts = 2

[select]
dependent = yield
selection = drought, serfdom, cereals
outcome = gold, distance
endogenous = distance
instruments = oblast_size_km2, density_per_km2, lost_war
"""


def write_dataset(data: SyntheticData, out) -> list[Path]:
    """Input files, manifest and a ready-to-run config under ``out``."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "monthly.csv", out / "events.csv"]
    write_monthly_csv(written[0], list(data.monthly.values()))
    write_event_csv(written[1], data.catalog)
    daily_line = eventstudy_extra = ""
    if data.daily is not None:
        written.append(out / "daily.csv")
        write_daily_csv(written[-1], data.daily)
        daily_line = "daily = daily.csv"
        eventstudy_extra = f"mode = both\nevent_date = {data.manifest['daily']['event_date']}"
    config_text = RUN_CONFIG.format(daily_line=daily_line, eventstudy_extra=eventstudy_extra)
    written.append(out / "run.ini")
    written[-1].write_text(config_text, encoding="utf-8")
    written.append(out / "manifest.json")
    save_json(written[-1], data.manifest)
    return written
