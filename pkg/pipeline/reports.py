"""
Report tables: a machine CSV and an aligned text rendering of the same rows.

Text cells show estimates to three decimals and absolute t-statistics in
parentheses with significance stars (*** 1%, ** 5%, * 10%, two-sided).
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd
from scipy import stats

from models import (
    AcgarchFit,
    DailyStudyResult,
    EventStudyResult,
    HeckmanFit,
    IvGmmFit,
    significance_stars,
)

FLOAT_FORMAT = "%.10g"


def fmt(value, digits: int = 3) -> str:
    if value is None:
        return ""
    value = float(value)
    if np.isnan(value):
        return "n/a"
    if np.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}f}"


def t_cell(t: Optional[float], p: Optional[float]) -> str:
    if t is None or not np.isfinite(t) and not np.isinf(t):
        return ""
    return f"({fmt(abs(t), 2)}){significance_stars(p)}"


@dataclass
class ReportTable:
    """One report: machine rows for CSV, display rows for text."""

    name: str
    title: str
    records: list
    display: list
    notes: list = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.records)

    def to_text(self) -> str:
        lines = [self.title, "=" * len(self.title)]
        if self.display:
            lines.append(pd.DataFrame(self.display).to_string(index=False))
        else:
            lines.append("(no rows)")
        lines.extend(self.notes)
        return "\n".join(lines) + "\n"

    def write(self, directory: Path) -> tuple[Path, Path]:
        directory.mkdir(parents=True, exist_ok=True)
        csv_path = directory / f"{self.name}.csv"
        txt_path = directory / f"{self.name}.txt"
        self.to_frame().to_csv(csv_path, index=False, float_format=FLOAT_FORMAT)
        txt_path.write_text(self.to_text(), encoding="utf-8")
        return csv_path, txt_path


STAR_NOTE = "Absolute t-statistics in parentheses: *** p<0.01, ** p<0.05, * p<0.10."


# Event studies

def event_study_table(name: str, title: str, results: list[EventStudyResult]) -> ReportTable:
    """One row per event filter: n, CAAR and both test statistics."""
    records, display = [], []
    for result in results:
        record = result.to_dict()
        records.append(record)
        row = {"Event": result.label, "n": result.n, "CAAR": fmt(result.caar)}
        for key, header in (("patell_adjusted", "Patell Adjusted"), ("grankt", "GRANKT")):
            test = result.tests.get(key)
            row[header] = t_cell(test.statistic, test.p_value) if test else ""
        display.append(row)
    window = f"[{results[0].spec.pre},{results[0].spec.post}]" if results else ""
    notes = [f"Event window {window}.", STAR_NOTE] if results else [STAR_NOTE]
    return ReportTable(name, title, records, display, notes)


DAILY_LABELS = {
    "return": "Yield return",
    "realized_vol": "Realized volatility",
    "intraday_vol": "Intraday volatility",
}


def daily_study_table(name: str, result: DailyStudyResult) -> ReportTable:
    """Measures down the side, one column per (history close, window)."""
    records = [row.to_dict() for row in result.rows]
    columns = []
    for row in result.rows:
        key = (row.history_close, tuple(row.window))
        if key not in columns:
            columns.append(key)
    display = []
    for measure in DAILY_LABELS:
        line = {"Measure": DAILY_LABELS[measure]}
        for close, window in columns:
            cell = result.cell(close, window, measure)
            line[f"t={close} [{window[0]},{window[1]}]"] = f"{fmt(cell.delta)} {t_cell(cell.statistic, cell.p_value)}"
        display.append(line)
    title = f"Daily historical-mean study around {result.event_date}"
    notes = ["Deltas are window mean minus historical mean, in percent units.", STAR_NOTE]
    return ReportTable(name, title, records, display, notes)


# ACGARCH-M

def garch_row_label(parameter: str, spec) -> str:
    if parameter == "mu":
        return "Constant"
    if parameter == "phi_lag":
        return f"Lagged {spec.dependent}"
    if parameter == "delta_mean":
        return "GARCH-in-mean"
    for prefix, suffix in (("beta[", ""), ("rho[", ""),
                           ("theta1[", " Long-Term Volatility"), ("theta2[", " Short-Term Volatility")):
        if parameter.startswith(prefix):
            return parameter[len(prefix):-1] + suffix
    return {
        "omega": "Long-run variance level",
        "rho_q": "Long-run persistence",
        "phi_q": "Long-run forecast error",
        "alpha_s": "Short-run ARCH",
        "kappa_lev": "Leverage",
        "beta_s": "Short-run persistence",
        "shape": "Shape",
    }.get(parameter, parameter)


def garch_table(name: str, title: str, fits: dict[str, Union[AcgarchFit, str]]) -> ReportTable:
    """
    Parameters down the side, one column per fit. A fit that failed is a
    string (the error message) and shows up as a flagged column.
    """
    records = []
    order: list[tuple[str, str]] = []
    cells: dict[str, dict[str, str]] = {}
    footer: dict[str, dict[str, str]] = {}
    for label, fit in fits.items():
        cells[label] = {}
        if isinstance(fit, str):
            records.append({"fit": label, "parameter": "status", "estimate": None, "std_error": None,
                            "t": None, "p_value": None, "stars": "", "note": f"FAILED: {fit}"})
            footer[label] = {"Status": "FAILED", "Adjusted R2": "", "AIC": "", "n": ""}
            continue
        t_stats = fit.t_stats()
        df = fit.n - fit.k
        for parameter, estimate in fit.estimates().items():
            t = t_stats[parameter]
            p = float(2 * stats.t.sf(abs(t), df)) if np.isfinite(t) else float("nan")
            records.append({
                "fit": label, "parameter": parameter, "estimate": estimate,
                "std_error": fit.std_errors.get(parameter), "t": t, "p_value": p,
                "stars": significance_stars(p), "note": "",
            })
            row_label = garch_row_label(parameter, fit.spec)
            if (parameter, row_label) not in order:
                order.append((parameter, row_label))
            cells[label][parameter] = f"{fmt(estimate)} {t_cell(t, p)}"
        for parameter, value in (("adj_r2", fit.adj_r2), ("aic", fit.aic), ("bic", fit.bic),
                                 ("loglik", fit.loglik), ("n", fit.n)):
            records.append({"fit": label, "parameter": parameter, "estimate": value, "std_error": None,
                            "t": None, "p_value": None, "stars": "", "note": ""})
        status = "converged" if fit.convergence.converged else "FAILED"
        footer[label] = {"Status": status, "Adjusted R2": fmt(fit.adj_r2), "AIC": fmt(fit.aic), "n": str(fit.n)}

    display = []
    for parameter, row_label in order:
        row = {"": row_label}
        row.update({label: cells[label].get(parameter, "") for label in fits})
        display.append(row)
    for key in ("Adjusted R2", "AIC", "n", "Status"):
        row = {"": key}
        row.update({label: footer[label][key] for label in fits})
        display.append(row)
    notes = [STAR_NOTE]
    for label, fit in fits.items():
        if not isinstance(fit, str):
            notes.append(f"{label}: in-mean transform {fit.spec.in_mean_transform.value}, "
                         f"{fit.spec.innovation.value} innovations, first month {fit.first_month}.")
    return ReportTable(name, title, records, display, notes)


# Selection

def heckman_table(name: str, title: str, fits: dict[str, HeckmanFit],
                  iv: Optional[IvGmmFit] = None) -> ReportTable:
    records = []
    display_rows: dict[str, dict] = {}
    columns = list(fits)
    for label, fit in fits.items():
        t_values = fit.t_values()
        for coef_name, estimate, se, t in zip(fit.names, fit.coefficients, fit.std_errors, t_values):
            p = float(2 * stats.norm.sf(abs(t))) if np.isfinite(t) else float("nan")
            records.append({"model": label, "row": coef_name, "estimate": estimate, "std_error": se,
                            "t": t, "p_value": p, "stars": significance_stars(p)})
            display_rows.setdefault(coef_name, {})[label] = f"{fmt(estimate, 4)} {t_cell(t, p)}"
        mills_t = fit.mills_coef / fit.mills_se if fit.mills_se and np.isfinite(fit.mills_se) else float("nan")
        extra = [
            ("Inverse Mills Ratio", fit.mills_coef, fit.mills_se, mills_t, fit.mills_p_value),
            ("rho", fit.rho, fit.rho_se, None, None),
            ("sigma", fit.sigma, fit.sigma_se, None, None),
        ]
        for row, estimate, se, t, p in extra:
            records.append({"model": label, "row": row, "estimate": estimate, "std_error": se,
                            "t": t, "p_value": p, "stars": significance_stars(p)})
            display_rows.setdefault(row, {})[label] = (
                f"{fmt(estimate, 4)} {t_cell(t, p)}".strip() if t is not None else fmt(estimate, 4)
            )
        for row, value in (("Selected n", fit.selected_n), ("Total n", fit.total_n),
                           ("Log-likelihood", fit.loglik)):
            records.append({"model": label, "row": row, "estimate": value, "std_error": None,
                            "t": None, "p_value": None, "stars": ""})
            display_rows.setdefault(row, {})[label] = "" if value is None else (
                str(value) if isinstance(value, int) else fmt(value))

    if iv is not None:
        columns.append("iv_gmm")
        for coef_name, estimate, se, t in zip(iv.names, iv.coefficients, iv.std_errors, iv.t_values()):
            p = float(2 * stats.norm.sf(abs(t))) if np.isfinite(t) else float("nan")
            records.append({"model": "iv_gmm", "row": coef_name, "estimate": estimate, "std_error": se,
                            "t": t, "p_value": p, "stars": significance_stars(p)})
            display_rows.setdefault(coef_name, {})["iv_gmm"] = f"{fmt(estimate, 4)} {t_cell(t, p)}"
        diagnostics = [
            ("Under-Identification (Kleibergen-Paap) LM", iv.kp_stat, iv.kp_p),
            ("Instrument Exogeneity (Hansen J)", iv.j_stat, iv.j_p),
        ]
        for row, statistic, p in diagnostics:
            records.append({"model": "iv_gmm", "row": row, "estimate": statistic, "std_error": None,
                            "t": None, "p_value": p, "stars": ""})
            display_rows.setdefault(row, {})["iv_gmm"] = (
                "not applicable" if statistic is None else f"{fmt(statistic)} (p={fmt(p)})"
            )
        records.append({"model": "iv_gmm", "row": "n", "estimate": iv.n, "std_error": None,
                        "t": None, "p_value": None, "stars": ""})
        display_rows.setdefault("Selected n", {})["iv_gmm"] = str(iv.n)

    display = []
    for row, values in display_rows.items():
        line = {"": row}
        line.update({label: values.get(label, "") for label in columns})
        display.append(line)
    notes = [STAR_NOTE]
    for label, fit in fits.items():
        if not fit.exclusion_restriction:
            notes.append(f"{label}: no exclusion restriction, identification by functional form only.")
    if iv is not None:
        notes.append(f"IV-GMM instruments: {', '.join(iv.instruments)}; endogenous: {', '.join(iv.endogenous)}.")
    return ReportTable(name, title, records, display, notes)


def rejection_table(name: str, title: str, rates: dict) -> ReportTable:
    """Empirical rejection rates by test and nominal level."""
    records, display = [], []
    for test, by_alpha in rates.items():
        for alpha, rate in sorted(by_alpha.items()):
            records.append({"test": test, "alpha": alpha, "rejection_rate": rate})
        display.append({"Test": test, **{f"alpha={alpha:g}": fmt(rate) for alpha, rate in sorted(by_alpha.items())}})
    return ReportTable(name, title, records, display)
