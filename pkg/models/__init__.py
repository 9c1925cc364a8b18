from .calendar import MonthIndex, month_range
from .design import DesignMatrix, Role
from .errors import (
    ConfigError,
    ConvergenceError,
    DataError,
    DataWarning,
    DroppedEventsWarning,
    EstimationWarning,
    NumericalError,
    SeparationError,
    UnrestRiskError,
)
from .event import ANY_EVENT, EventCatalog, EventFilter, EventKind, EventRecord, LocationClass
from .eventstudy import (
    BaselineModel,
    DailyStudyResult,
    DailyStudyRow,
    EventSample,
    EventStudyResult,
    EventStudySpec,
    EventTest,
    TestStatistic,
    significance_stars,
)
from .garch import (
    TRANSFORM_PREFERENCE,
    AcgarchFit,
    AcgarchParams,
    AcgarchSpec,
    AsymmetryMode,
    ConvergenceReport,
    InMeanTransform,
    Innovation,
)
from .selection import HeckmanFit, IvGmmFit, ProbitFit
from .series import DailyQuote, DailyQuoteSeries, MonthlySeries, overlap, series_from_values

__all__ = [
    "ANY_EVENT",
    "TRANSFORM_PREFERENCE",
    "AcgarchFit",
    "AcgarchParams",
    "AcgarchSpec",
    "AsymmetryMode",
    "BaselineModel",
    "ConfigError",
    "ConvergenceError",
    "ConvergenceReport",
    "DailyQuote",
    "DailyQuoteSeries",
    "DailyStudyResult",
    "DailyStudyRow",
    "DataError",
    "DataWarning",
    "DesignMatrix",
    "DroppedEventsWarning",
    "EstimationWarning",
    "EventCatalog",
    "EventFilter",
    "EventKind",
    "EventRecord",
    "EventSample",
    "EventStudyResult",
    "EventStudySpec",
    "EventTest",
    "HeckmanFit",
    "InMeanTransform",
    "Innovation",
    "IvGmmFit",
    "LocationClass",
    "MonthIndex",
    "MonthlySeries",
    "NumericalError",
    "ProbitFit",
    "Role",
    "SeparationError",
    "TestStatistic",
    "UnrestRiskError",
    "month_range",
    "overlap",
    "series_from_values",
]
