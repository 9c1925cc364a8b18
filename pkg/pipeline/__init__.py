from .commands import (
    cmd_eventstudy,
    cmd_features,
    cmd_garch,
    cmd_ingest,
    cmd_report,
    cmd_select,
    cmd_simulate,
)
from .config import DEFAULT_EVENT_FILTERS, DEFAULTS, Config, describe_defaults
from .montecarlo import event_study_monte_carlo, rejection_rates, run_replications
from .reports import ReportTable
from .simulate import SimulationSettings, SyntheticData, garch_truth, simulate_dataset, write_dataset
from .workspace import Workspace

__all__ = [
    "DEFAULTS",
    "DEFAULT_EVENT_FILTERS",
    "Config",
    "ReportTable",
    "SimulationSettings",
    "SyntheticData",
    "Workspace",
    "cmd_eventstudy",
    "cmd_features",
    "cmd_garch",
    "cmd_ingest",
    "cmd_report",
    "cmd_select",
    "cmd_simulate",
    "describe_defaults",
    "event_study_monte_carlo",
    "garch_truth",
    "rejection_rates",
    "run_replications",
    "simulate_dataset",
    "write_dataset",
]
