"""
Run configuration.

One INI file drives every command, one section per command::

    [ingest]
    monthly = data/monthly.csv
    events = data/events.csv
    daily = data/daily.csv

    [eventstudy]
    series = yield_return
    models = raw_returns, constant_mean
    window = -1, 1

    [garch.controls_yield]
    dependent = yield
    controls = gold, drought

Every key has a default listed in ``DEFAULTS``; ``main.py --help`` prints them.
"""

import configparser
from pathlib import Path
from typing import Optional

from models import ConfigError, DataError, EventFilter, MonthIndex

# Rows of the monthly event-study tables. ``name`` is also the feature
# column holding the row's event dummy.
DEFAULT_EVENT_FILTERS = [
    {"name": "attempted_empire", "label": "Attempted Assassination Empire",
     "filter": "kind=attempted_assassination; location=homeland,imperial"},
    {"name": "attempted_homeland", "label": "Attempted Assassination Homeland",
     "filter": "kind=attempted_assassination; location=homeland"},
    {"name": "attempted_imperial", "label": "Attempted Assassination Imperial",
     "filter": "kind=attempted_assassination; location=imperial"},
    {"name": "successful_empire", "label": "Successful Assassination Empire",
     "filter": "kind=successful_assassination; location=homeland,imperial"},
    {"name": "successful_homeland", "label": "Successful Assassination Homeland",
     "filter": "kind=successful_assassination; location=homeland"},
    {"name": "successful_imperial", "label": "Successful Assassination Imperial",
     "filter": "kind=successful_assassination; location=imperial"},
    {"name": "unrest_empire", "label": "Unrest Empire",
     "filter": "kind=collective; location=homeland,imperial; exclude=caucasus_rebellion,caucasus_war"},
    {"name": "unrest_homeland", "label": "Unrest Homeland",
     "filter": "kind=collective; location=homeland"},
    {"name": "unrest_imperial", "label": "Unrest Imperial",
     "filter": "kind=collective; location=imperial; exclude=caucasus_rebellion,caucasus_war"},
    {"name": "unrest_imperial_caucasus", "label": "Unrest Imperial with Caucasus Events",
     "filter": "kind=collective; location=imperial; exclude=caucasus_war"},
    # Caucasus wars are external events, so the kind set widens and the tag
    # set keeps every other external conflict out.
    {"name": "unrest_imperial_caucasus_war", "label": "Unrest Imperial with Caucasus Events and War",
     "filter": "kind=collective,external; tag=ukraine,other_imperial,caucasus_rebellion,caucasus_war"},
    {"name": "external", "label": "External Conflict",
     "filter": "kind=external"},
]

DEFAULTS = {
    "ingest": {
        "monthly": "monthly.csv",
        "events": "events.csv",
        "daily": "",
        "schema": "",
    },
    "features": {
        "yield": "yield",
        "benchmark": "benchmark",
        "cumulative_window": "12",
        "interactions": "",
        "lags": "",
        "bk_columns": "",
        "bk_low": "2",
        "bk_high": "8",
        "bk_k": "3",
        "distance_mode": "raw_km",
    },
    "eventstudy": {
        "mode": "monthly",
        "series": "yield_return",
        "models": "raw_returns, constant_mean",
        "window": "-1, 1",
        "estimation_window": "60",
        "tests": "patell_adjusted, grankt",
        "event_date": "",
        "history_closes": "-30, -20",
        "windows": "-1:1, -3:3, -5:5",
        "history_length": "250",
    },
    "garch": {
        "dependent": "yield",
        "lagged_dependent": "true",
        "unrest": "",
        "controls": "",
        "longrun_exog": "",
        "shortrun_exog": "",
        "in_mean_transform": "identity",
        "criterion": "aic",
        "innovation": "student_t",
        "asymmetry_mode": "negative_residual",
        "component": "true",
        "asymmetric": "true",
        "in_mean": "true",
        "first": "",
        "last": "",
        "multistarts": "5",
        "tol": "1e-10",
        "max_iter": "500",
        "robust": "false",
        "n_jobs": "1",
        "seed": "0",
    },
    "select": {
        "dependent": "yield",
        "selection": "",
        "outcome": "",
        "indicator": "selected",
        "methods": "two_step, ml",
        "endogenous": "",
        "instruments": "",
    },
    "simulate": {
        "seed": "",
        "start": "1820-01",
        "months": "1140",
        "daily_days": "600",
        "event_effect": "0.02",
        "size_replications": "0",
        "size_events": "30",
        "n_jobs": "1",
    },
}


def split_list(text: str) -> list[str]:
    return [part.strip() for part in str(text).split(",") if part.strip()]


class Config:
    """
    Typed access to an INI file with per-section defaults.

    Usage:
        config = Config.load("run.ini")
        window = config.get_int_pair("eventstudy", "window")
    """

    def __init__(self, parser: configparser.ConfigParser, path: Optional[Path] = None):
        self.parser = parser
        self.path = path

    @classmethod
    def load(cls, path) -> "Config":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file {path} not found")
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read(path, encoding="utf-8")
        except configparser.Error as e:
            raise ConfigError(f"cannot parse config {path}: {e}") from None
        config = cls(parser, path)
        config.validate()
        return config

    @classmethod
    def from_string(cls, text: str) -> "Config":
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read_string(text)
        except configparser.Error as e:
            raise ConfigError(f"cannot parse config: {e}") from None
        config = cls(parser)
        config.validate()
        return config

    @classmethod
    def empty(cls) -> "Config":
        return cls(configparser.ConfigParser(interpolation=None))

    def validate(self) -> None:
        """Reject unknown sections and keys, which are almost always typos."""
        for section in self.parser.sections():
            if section == "eventstudy.filters":
                continue
            family = section.split(".", 1)[0]
            if family not in DEFAULTS or ("." in section and family != "garch"):
                raise ConfigError(f"unknown config section [{section}]")
            unknown = sorted(set(self.parser.options(section)) - set(DEFAULTS[family]))
            if unknown:
                raise ConfigError(f"unknown setting(s) in [{section}]: {', '.join(unknown)}")

    def has_section(self, section: str) -> bool:
        return self.parser.has_section(section)

    def sections(self, prefix: str) -> list[str]:
        """Sections named ``prefix`` or ``prefix.<label>``, in file order."""
        return [s for s in self.parser.sections() if s == prefix or s.startswith(prefix + ".")]

    def _default(self, section: str, key: str) -> str:
        family = section.split(".", 1)[0]
        try:
            return DEFAULTS[family][key]
        except KeyError:
            raise ConfigError(f"unknown setting [{section}] {key}") from None

    def get(self, section: str, key: str) -> str:
        if self.parser.has_option(section, key):
            return self.parser.get(section, key).strip()
        return self._default(section, key)

    def get_list(self, section: str, key: str) -> list[str]:
        return split_list(self.get(section, key))

    def get_int(self, section: str, key: str) -> int:
        value = self.get(section, key)
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"[{section}] {key} must be an integer, got '{value}'") from None

    def get_float(self, section: str, key: str) -> float:
        value = self.get(section, key)
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"[{section}] {key} must be a number, got '{value}'") from None

    def get_bool(self, section: str, key: str) -> bool:
        value = self.get(section, key).lower()
        if value in ("1", "true", "yes", "on"):
            return True
        if value in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"[{section}] {key} must be true or false, got '{value}'")

    def get_int_pair(self, section: str, key: str) -> tuple[int, int]:
        parts = self.get_list(section, key)
        try:
            lo, hi = (int(p) for p in parts)
        except ValueError:
            raise ConfigError(f"[{section}] {key} must be two integers like '-1, 1', got '{self.get(section, key)}'") from None
        return lo, hi

    def get_windows(self, section: str, key: str) -> list[tuple[int, int]]:
        windows = []
        for part in self.get_list(section, key):
            lo, sep, hi = part.partition(":")
            try:
                windows.append((int(lo), int(hi)))
            except ValueError:
                raise ConfigError(f"[{section}] {key}: window '{part}' must look like -1:1") from None
            if not sep:
                raise ConfigError(f"[{section}] {key}: window '{part}' must look like -1:1")
        return windows

    def get_month(self, section: str, key: str) -> Optional[MonthIndex]:
        value = self.get(section, key)
        if not value:
            return None
        try:
            return MonthIndex.parse(value)
        except DataError as e:
            raise ConfigError(f"[{section}] {key}: {e}") from None

    def get_mapping(self, section: str, key: str) -> dict[str, str]:
        """``a:b, c:d`` -> {"a": "b", "c": "d"}."""
        mapping = {}
        for part in self.get_list(section, key):
            left, sep, right = part.partition(":")
            if not sep or not left.strip() or not right.strip():
                raise ConfigError(f"[{section}] {key}: entry '{part}' must look like name:value")
            mapping[left.strip()] = right.strip()
        return mapping

    def event_filters(self) -> list[dict]:
        """
        Rows of the monthly event study: ``[eventstudy.filters]`` entries
        (``name = filter text``) when present, else the default twelve.
        """
        section = "eventstudy.filters"
        if not self.parser.has_section(section):
            rows = DEFAULT_EVENT_FILTERS
        else:
            rows = [{"name": name, "label": name, "filter": text}
                    for name, text in self.parser.items(section)]
            if not rows:
                raise ConfigError("[eventstudy.filters] is empty")
        parsed = []
        for row in rows:
            try:
                parsed.append({**row, "event_filter": EventFilter.parse(row["filter"])})
            except DataError as e:
                raise ConfigError(f"event filter '{row['name']}': {e}") from None
        return parsed


def describe_defaults() -> str:
    """Default settings, one section per block, for ``--help``."""
    lines = []
    for section, values in DEFAULTS.items():
        lines.append(f"[{section}]")
        lines.extend(f"  {key} = {value}" for key, value in values.items())
    return "\n".join(lines)
