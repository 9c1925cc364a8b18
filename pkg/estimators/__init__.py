from .acgarch import (
    FitOptions,
    AcgarchLikelihood,
    fit,
    information_criteria,
    loglik,
    parameter_names,
    prepare_data,
    select_in_mean_transform,
    simulate,
    simulated_design,
)
from .base import two_sided_p
from .daily import HISTORY_CLOSES, HISTORY_LENGTH, MEASURES, WINDOWS, daily_hmm_study, daily_measures
from .distributions import GED, Distribution, StudentT, get_distribution
from .eventstudy import (
    abnormal_returns,
    abnormal_returns_constant_mean,
    abnormal_returns_raw,
    average_cross_correlation,
    caar,
    events_with_history,
    grankt_test,
    patell_adjusted_test,
    run_event_study,
    standardized_cars,
)
from .ivgmm import iv_gmm, kleibergen_paap_lm
from .selection import heckman, inverse_mills, probit_fit

__all__ = [
    "GED",
    "HISTORY_CLOSES",
    "HISTORY_LENGTH",
    "MEASURES",
    "WINDOWS",
    "AcgarchLikelihood",
    "Distribution",
    "FitOptions",
    "StudentT",
    "abnormal_returns",
    "abnormal_returns_constant_mean",
    "abnormal_returns_raw",
    "average_cross_correlation",
    "caar",
    "daily_hmm_study",
    "daily_measures",
    "events_with_history",
    "fit",
    "get_distribution",
    "grankt_test",
    "heckman",
    "information_criteria",
    "inverse_mills",
    "iv_gmm",
    "kleibergen_paap_lm",
    "loglik",
    "parameter_names",
    "patell_adjusted_test",
    "prepare_data",
    "probit_fit",
    "run_event_study",
    "select_in_mean_transform",
    "simulate",
    "simulated_design",
    "standardized_cars",
    "two_sided_p",
]
