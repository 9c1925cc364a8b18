from .features import (
    VERST_KM,
    baxter_king,
    baxter_king_weights,
    cumulative_count,
    distance_feature,
    event_attribute_series,
    event_dummies,
    interaction_dummy,
    lag,
    lead,
    located_distance_series,
    multiple_events_dummy,
    selection_indicator,
    versts_to_km,
)
from .returns import (
    PARKINSON_CONSTANT,
    annual_liquidity,
    liquidity,
    log_return,
    parkinson_intraday,
    parkinson_series,
    realized_vol,
    spread,
)

__all__ = [
    "PARKINSON_CONSTANT",
    "VERST_KM",
    "annual_liquidity",
    "baxter_king",
    "baxter_king_weights",
    "cumulative_count",
    "distance_feature",
    "event_attribute_series",
    "event_dummies",
    "interaction_dummy",
    "lag",
    "lead",
    "liquidity",
    "located_distance_series",
    "log_return",
    "multiple_events_dummy",
    "parkinson_intraday",
    "parkinson_series",
    "realized_vol",
    "selection_indicator",
    "spread",
]
