"""
The ``cmd_*`` functions behind each ``main.py`` subcommand.

Each takes the loaded Config and a Workspace, prints progress lines prefixed
with its command name and leaves its outputs in the workspace. Library
errors propagate; ``main.py`` turns them into exit codes.
"""

import warnings
from datetime import date
from pathlib import Path
from typing import Optional

import numpy as np

from estimators import (
    FitOptions,
    daily_hmm_study,
    events_with_history,
    fit,
    heckman,
    inverse_mills,
    iv_gmm,
    run_event_study,
    select_in_mean_transform,
)
from models import (
    AcgarchSpec,
    BaselineModel,
    ConfigError,
    DataError,
    DataWarning,
    DesignMatrix,
    DroppedEventsWarning,
    EventFilter,
    EventKind,
    EventStudySpec,
    LocationClass,
    MonthlySeries,
    NumericalError,
    Role,
)
from readers import parse_daily_csv, parse_event_csv, parse_monthly_csv
from transforms import (
    annual_liquidity,
    baxter_king,
    cumulative_count,
    event_attribute_series,
    event_dummies,
    interaction_dummy,
    lag,
    located_distance_series,
    log_return,
    multiple_events_dummy,
    realized_vol,
    selection_indicator,
    spread,
)

from .config import Config
from .montecarlo import event_study_monte_carlo
from .reports import (
    ReportTable,
    daily_study_table,
    event_study_table,
    fmt,
    garch_table,
    heckman_table,
    rejection_table,
)
from .simulate import SimulationSettings, simulate_dataset, write_dataset
from .workspace import INGEST_REPORT, Workspace

MODEL_TITLES = {
    BaselineModel.RAW_RETURNS: "Raw Returns Model",
    BaselineModel.CONSTANT_MEAN: "Constant Mean Model",
}


def log(command: str, message: str) -> None:
    print(f"[{command}] {message}")


def _input_path(config: Config, key: str) -> Optional[Path]:
    value = config.get("ingest", key)
    if not value:
        return None
    path = Path(value)
    if not path.is_absolute() and config.path is not None:
        path = config.path.parent / path
    return path


def _span(columns: dict[str, MonthlySeries]):
    first = min(s.start for s in columns.values())
    last = max(s.end for s in columns.values())
    return first, last


# ============================================================================
# ingest
# ============================================================================

def cmd_ingest(config: Config, workspace: Workspace) -> dict:
    """Validate the input files, copy them into the workspace and write an ingestion report."""
    monthly_path = _input_path(config, "monthly")
    events_path = _input_path(config, "events")
    if monthly_path is None or events_path is None:
        raise ConfigError("[ingest] needs both monthly and events paths")
    monthly = parse_monthly_csv(monthly_path, config.get_mapping("ingest", "schema") or None)
    catalog = parse_event_csv(events_path)
    if not len(catalog):
        warnings.warn(f"{events_path} has no events; every event dummy will be zero", DataWarning, stacklevel=2)
    first, last = _span(monthly)
    catalog.validate_within(first, last)

    daily = None
    daily_path = _input_path(config, "daily")
    if daily_path is not None:
        daily = parse_daily_csv(daily_path)

    workspace.save_inputs(monthly, catalog, daily)

    by_kind = {k.value: catalog.event_month_count(_kind_filter(k)) for k in EventKind}
    by_location = {
        loc.value: sum(r.duration_months for r in catalog if r.location_class is loc) for loc in LocationClass
    }
    report = {
        "monthly": {
            "file": str(monthly_path),
            "first": str(first),
            "last": str(last),
            "months": first.months_until(last) + 1,
            "columns": {name: {"missing": s.missing_count()} for name, s in monthly.items()},
        },
        "events": {
            "file": str(events_path),
            "records": len(catalog),
            "located_records": sum(1 for r in catalog if r.is_located),
            "event_months": catalog.event_month_count(),
            "event_months_by_kind": by_kind,
            "event_months_by_location": by_location,
        },
        "daily": None if daily is None else {
            "file": str(daily_path),
            "days": len(daily),
            "first": str(daily.dates()[0]),
            "last": str(daily.dates()[-1]),
        },
    }
    workspace.save_json(INGEST_REPORT, report)

    log("ingest", f"{len(monthly)} monthly columns, {first}..{last} ({report['monthly']['months']} months)")
    gaps = {name: s.missing_count() for name, s in monthly.items() if s.missing_count()}
    if gaps:
        log("ingest", "gaps: " + ", ".join(f"{name} {count}" for name, count in gaps.items()))
    log("ingest", f"{len(catalog)} events, {report['events']['located_records']} located, "
                  f"{report['events']['event_months']} event-months")
    if daily is not None:
        log("ingest", f"{len(daily)} daily quotes")
    return report


def _kind_filter(kind: EventKind) -> EventFilter:
    return EventFilter(kinds=frozenset({kind}))


# ============================================================================
# features
# ============================================================================

def cmd_features(config: Config, workspace: Workspace) -> list[MonthlySeries]:
    """Returns, volatility, spread, event dummies and the other derived columns."""
    section = "features"
    monthly = workspace.monthly()
    catalog = workspace.events()
    first, last = _span(monthly)
    built: dict[str, MonthlySeries] = {}

    def add(series: MonthlySeries) -> None:
        if series.name in built or series.name in monthly:
            raise ConfigError(f"feature column '{series.name}' would be written twice")
        built[series.name] = series

    yields = workspace.column(config.get(section, "yield"), monthly)
    returns = log_return(yields)
    add(returns)
    add(realized_vol(returns))

    benchmark_name = config.get(section, "benchmark").lower()
    if benchmark_name in monthly:
        add(spread(yields, monthly[benchmark_name]))
    elif config.parser.has_option(section, "benchmark"):
        workspace.column(benchmark_name, monthly)

    window = config.get_int(section, "cumulative_window")
    rows = {row["name"]: row for row in config.event_filters()}
    for name, row in rows.items():
        dummy = event_dummies(catalog, first, last, row["event_filter"], name)
        add(dummy)
        add(cumulative_count(dummy, window, f"{name}_count"))
    add(multiple_events_dummy(catalog, first, last))
    for name in config.get_list(section, "interactions"):
        if name not in rows:
            raise ConfigError(f"[features] interactions: '{name}' is not an event-filter row ({', '.join(rows)})")
        add(interaction_dummy(rows[name]["event_filter"], catalog, first, last, f"{name}_interaction"))

    add(selection_indicator(catalog, first, last))
    add(located_distance_series(catalog, first, last, config.get(section, "distance_mode")))
    for attribute in ("oblast_size_km2", "density_per_km2"):
        add(event_attribute_series(catalog, first, last, attribute))

    available = {**monthly, **built}
    for name, k in config.get_mapping(section, "lags").items():
        try:
            k = int(k)
        except ValueError:
            raise ConfigError(f"[features] lags: '{name}:{k}' needs an integer lag") from None
        add(lag(workspace.column(name, available), k))
    for name in config.get_list(section, "bk_columns"):
        add(baxter_king(workspace.column(name, available), config.get_float(section, "bk_low"),
                        config.get_float(section, "bk_high"), config.get_int(section, "bk_k")))

    workspace.save_features(list(built.values()))
    liquidity = annual_liquidity(returns)
    ReportTable(
        name="liquidity",
        title=f"Annual liquidity of {yields.name}",
        records=[{"year": year, "liquidity": value} for year, value in liquidity.items()],
        display=[{"Year": year, "Liquidity": fmt(value)} for year, value in liquidity.items()],
        notes=["Share of months in the year with a nonzero return."],
    ).write(workspace.path("reports"))

    log("features", f"{len(built)} derived columns over {first}..{last}")
    for name, row in rows.items():
        log("features", f"{row['label']}: {int(np.nansum(built[name].to_array()))} event-months")
    return list(built.values())


# ============================================================================
# eventstudy
# ============================================================================

def cmd_eventstudy(config: Config, workspace: Workspace) -> list[ReportTable]:
    section = "eventstudy"
    mode = config.get(section, "mode")
    if mode not in ("monthly", "daily", "both"):
        raise ConfigError(f"[eventstudy] mode must be monthly, daily or both, got '{mode}'")
    tables = []
    if mode in ("monthly", "both"):
        tables.extend(_monthly_event_study(config, workspace))
    if mode in ("daily", "both"):
        tables.append(_daily_event_study(config, workspace))
    for table in tables:
        table.write(workspace.path("reports"))
    return tables


def _monthly_event_study(config: Config, workspace: Workspace) -> list[ReportTable]:
    section = "eventstudy"
    returns = workspace.column(config.get(section, "series"))
    catalog = workspace.events()
    rows = config.event_filters()
    pre, post = config.get_int_pair(section, "window")
    try:
        models = [BaselineModel(m) for m in config.get_list(section, "models")]
    except ValueError as e:
        raise ConfigError(f"[eventstudy] models: {e}") from None
    tests = config.get_list(section, "tests")
    length = config.get_int(section, "estimation_window")

    tables = []
    for model in models:
        try:
            spec = EventStudySpec(model, pre, post, length, frozenset(tests))
        except ValueError as e:
            raise ConfigError(f"[eventstudy] {e}") from None
        log("eventstudy", f"{MODEL_TITLES[model]}: {len(rows)} filters, window [{pre}, {post}]")
        results = []
        for row in rows:
            months = catalog.event_months(row["event_filter"])
            if not months:
                raise DataError(f"event filter '{row['label']}' ({row['filter']}) matches no events")
            kept, skipped = events_with_history(returns, months, spec)
            if skipped:
                warnings.warn(
                    f"{row['label']}: {len(skipped)} event(s) too close to the sample edges for this model",
                    DroppedEventsWarning, stacklevel=2,
                )
            if not kept:
                raise DataError(f"event filter '{row['label']}' has no event with enough data around it")
            result = run_event_study(returns, kept, spec, row["label"])
            results.append(result)
            log("eventstudy", f"  {row['label']}: n={result.n}, CAAR {fmt(result.caar)}")
        title = f"{MODEL_TITLES[model]}: abnormal {returns.name}, window [{pre:+d},{post:+d}]"
        tables.append(event_study_table(f"eventstudy_{model.value}", title, results))
    return tables


def _daily_event_study(config: Config, workspace: Workspace) -> ReportTable:
    section = "eventstudy"
    text = config.get(section, "event_date")
    if not text:
        raise ConfigError("[eventstudy] daily mode needs event_date = YYYY-MM-DD")
    try:
        event_date = date.fromisoformat(text)
    except ValueError:
        raise ConfigError(f"[eventstudy] event_date '{text}' is not YYYY-MM-DD") from None
    closes = [int(c) for c in config.get_list(section, "history_closes")]
    windows = config.get_windows(section, "windows")
    result = daily_hmm_study(workspace.daily(), event_date, closes, windows,
                             config.get_int(section, "history_length"))
    log("eventstudy", f"daily study around {event_date}: {len(result.rows)} cells")
    return daily_study_table("eventstudy_daily", result)


# ============================================================================
# garch
# ============================================================================

def _garch_spec(config: Config, section: str) -> AcgarchSpec:
    try:
        return AcgarchSpec(
            dependent=config.get(section, "dependent").lower(),
            include_lagged_dependent=config.get_bool(section, "lagged_dependent"),
            unrest_columns=tuple(c.lower() for c in config.get_list(section, "unrest")),
            control_columns=tuple(c.lower() for c in config.get_list(section, "controls")),
            in_mean_transform="identity" if config.get(section, "in_mean_transform") == "select"
            else config.get(section, "in_mean_transform"),
            longrun_exog=tuple(c.lower() for c in config.get_list(section, "longrun_exog")),
            shortrun_exog=tuple(c.lower() for c in config.get_list(section, "shortrun_exog")),
            asymmetry_mode=config.get(section, "asymmetry_mode"),
            innovation=config.get(section, "innovation"),
            component=config.get_bool(section, "component"),
            asymmetric=config.get_bool(section, "asymmetric"),
            in_mean=config.get_bool(section, "in_mean"),
        )
    except DataError as e:
        raise ConfigError(f"[{section}] {e}") from None


def _garch_design(spec: AcgarchSpec, columns: dict, workspace: Workspace, first, last) -> DesignMatrix:
    roles = (
        [(spec.dependent, Role.DEPENDENT)]
        + [(n, Role.UNREST) for n in spec.unrest_columns]
        + [(n, Role.CONTROL) for n in spec.control_columns]
        + [(n, Role.VARIANCE_EXOG_LONGRUN) for n in spec.longrun_exog]
        + [(n, Role.VARIANCE_EXOG_SHORTRUN) for n in spec.shortrun_exog]
    )
    assignments, seen = [], set()
    for name, role in roles:
        if name in seen:
            continue
        seen.add(name)
        assignments.append((workspace.column(name, columns), role))
    return DesignMatrix.from_series(assignments, first, last)


def cmd_garch(config: Config, workspace: Workspace, seed: Optional[int] = None) -> ReportTable:
    """
    One ACGARCH-M fit per ``[garch]`` / ``[garch.<label>]`` section. A fit
    that fails numerically becomes a flagged column instead of an error.
    """
    sections = config.sections("garch")
    if not sections:
        raise ConfigError("no [garch] or [garch.<label>] section in the config")
    columns = workspace.columns()
    fits = {}
    runlog = {}
    for section in sections:
        label = section.split(".", 1)[1] if "." in section else "garch"
        spec = _garch_spec(config, section)
        design = _garch_design(spec, columns, workspace,
                               config.get_month(section, "first"), config.get_month(section, "last"))
        options = FitOptions(
            multistarts=config.get_int(section, "multistarts"),
            tol=config.get_float(section, "tol"),
            max_iter=config.get_int(section, "max_iter"),
            seed=seed if seed is not None else config.get_int(section, "seed"),
            robust=config.get_bool(section, "robust"),
            n_jobs=config.get_int(section, "n_jobs"),
        )
        log("garch", f"{label}: {spec.dependent} on {', '.join(spec.columns()[1:]) or 'constant only'}, "
                     f"{design.start}..{design.end}")
        entry = {"spec": spec.to_dict(), "options": {"multistarts": options.multistarts, "tol": options.tol,
                                                     "max_iter": options.max_iter, "seed": options.seed,
                                                     "robust": options.robust}}
        try:
            if config.get(section, "in_mean_transform") == "select":
                criterion = config.get(section, "criterion")
                chosen, candidates = select_in_mean_transform(spec, design, criterion, options)
                fits[label] = candidates[chosen]
                entry["transform_selection"] = {
                    "criterion": criterion,
                    "chosen": chosen.value,
                    "candidates": {t.value: getattr(f, criterion) for t, f in candidates.items()},
                }
            else:
                fits[label] = fit(spec, design, options)
            entry["fit"] = fits[label].to_dict()
            log("garch", f"{label}: loglik {fmt(fits[label].loglik)}, AIC {fmt(fits[label].aic)}, "
                         f"n={fits[label].n}")
        except NumericalError as e:
            fits[label] = str(e)
            entry["failure"] = {"message": str(e), "report": getattr(e, "report", {})}
            log("garch", f"{label}: FAILED ({e})")
        runlog[label] = entry

    table = garch_table("garch", "ACGARCH-M estimates", fits)
    table.write(workspace.path("reports"))
    workspace.save_json("reports/garch_runlog.json", runlog)
    return table


# ============================================================================
# select
# ============================================================================

def cmd_select(config: Config, workspace: Workspace) -> ReportTable:
    """Heckman selection models and, when configured, IV-GMM on the selected months."""
    section = "select"
    selection = [c.lower() for c in config.get_list(section, "selection")]
    outcome = [c.lower() for c in config.get_list(section, "outcome")]
    if not selection or not outcome:
        raise ConfigError("[select] must declare stage membership: list 'selection' and 'outcome' columns")
    dependent = config.get(section, "dependent").lower()
    indicator = config.get(section, "indicator").lower()
    methods = config.get_list(section, "methods")
    endogenous = config.get(section, "endogenous").lower()
    instruments = [c.lower() for c in config.get_list(section, "instruments")]
    if endogenous and not instruments:
        raise ConfigError("[select] endogenous is set but no instruments are listed")

    columns = workspace.columns()
    names = list(dict.fromkeys([dependent, indicator] + selection + outcome + instruments))
    design = DesignMatrix.from_series(
        [(workspace.column(n, columns), Role.INSTRUMENT if n in instruments else Role.CONTROL) for n in names]
    )
    rows = ~design.incomplete_rows(selection + [indicator])
    X = design.array(selection)[rows]
    s = design.array([indicator])[rows, 0]
    W = design.array(outcome)[rows]
    y = design.array([dependent])[rows, 0]
    log("select", f"{int(rows.sum())} months, {int(s.sum())} selected ({indicator})")

    fits = {}
    for method in methods:
        fits[method] = heckman(X, s, W, y, method=method, select_names=selection, outcome_names=outcome)
        log("select", f"Heckman {method}: Mills {fmt(fits[method].mills_coef, 4)}, rho {fmt(fits[method].rho)}")

    iv = None
    if endogenous:
        if endogenous not in outcome:
            raise ConfigError(f"[select] endogenous column '{endogenous}' must be one of the outcome columns")
        probit = next(iter(fits.values())).probit if fits else None
        if probit is None:
            raise ConfigError("[select] IV-GMM needs at least one Heckman method for the inverse Mills ratio")
        sel = s == 1
        exog_names = [c for c in outcome if c != endogenous]
        imr = inverse_mills(probit.index)[sel]
        W_exog = np.column_stack([design.array(exog_names)[rows][sel], imr])
        x = design.array([endogenous])[rows][sel, 0]
        Z = design.array(instruments)[rows][sel]
        y_sel = y[sel]
        complete = ~np.isnan(np.column_stack([W_exog, x, Z, y_sel])).any(axis=1)
        iv = iv_gmm(y_sel[complete], W_exog[complete], x[complete], Z[complete],
                    exog_names=exog_names + ["inverse_mills"], endog_name=endogenous,
                    instrument_names=instruments)
        log("select", f"IV-GMM: KP LM {fmt(iv.kp_stat)} (p={fmt(iv.kp_p)}), "
                      f"Hansen J {fmt(iv.j_stat) or 'n/a'} (p={fmt(iv.j_p) or 'n/a'})")

    table = heckman_table("select", f"Selection-corrected {dependent}", fits, iv)
    table.write(workspace.path("reports"))
    return table


# ============================================================================
# simulate / report
# ============================================================================

def cmd_simulate(config: Config, seed: Optional[int], out) -> list[Path]:
    """Synthetic inputs plus manifest and run config; optionally an event-study size report."""
    settings = SimulationSettings.from_config(config, seed)
    data = simulate_dataset(settings)
    written = write_dataset(data, out)
    log("simulate", f"seed {settings.seed}: {settings.months} months, {len(data.catalog)} events -> {out}")
    if settings.size_replications > 0:
        mc = event_study_monte_carlo(settings.size_replications, settings.seed, settings.size_events,
                                     n_jobs=settings.n_jobs)
        table = rejection_table(
            "size_report",
            f"Event-study rejection rates under the null ({settings.size_replications} replications, "
            f"{settings.size_events} events)",
            mc["rates"],
        )
        written.extend(table.write(Path(out)))
        for test, rates in mc["rates"].items():
            log("simulate", f"{test}: size at 5% = {fmt(rates[0.05])}")
    return written


def cmd_report(workspace: Workspace, out=None) -> Path:
    """Concatenate every text report in the workspace into one document."""
    target = Path(out) if out else workspace.report_path("report.txt")
    parts = [p.read_text(encoding="utf-8") for p in workspace.reports(".txt") if p.resolve() != target.resolve()]
    if not parts:
        raise DataError(f"workspace {workspace.root} has no reports yet")
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text("\n".join(parts), encoding="utf-8")
    log("report", f"{len(parts)} reports -> {target}")
    return target
