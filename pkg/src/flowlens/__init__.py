"""Transaction-flow investigation toolkit.

Enumerates bounded-length payment paths in temporal transaction networks,
weighs flows between entities, scores per-interval flow weights against
moving-average expectations and ranks intermediaries by abnormal growth.
"""

from .anomaly import (
    AnomalyFlag,
    ExpectationConfig,
    ExpectationMethod,
    IntermediaryRankingRow,
    RankingResult,
    ewma,
    flag_anomalies,
    normalize_series,
    pct_deviation,
    rank_intermediaries,
    wma,
)
from .flows import (
    Flow,
    FlowSeries,
    PathTableRow,
    build_flow,
    flow_series,
    flow_through,
    flow_weight,
    path_min,
    path_table_rows,
    path_weight,
    through_series,
)
from .graph import (
    AggregationSpec,
    Bucket,
    Granularity,
    IntervalId,
    TemporalNetwork,
    bucket_of,
    build_networks,
)
from .ingest import (
    IngestError,
    PseudonymMap,
    RowError,
    TransactionRecord,
    parse_transactions,
    pseudonymize,
    serialize_transactions,
)
from .pathfinder import (
    Path,
    brute_force_paths,
    count_calls,
    find_paths,
    iter_paths,
    temporal_feasibility,
)
from .snapshot import DatasetSnapshot
from .synth import BaselinePattern, GroundTruth, Injection, ScenarioConfig, fan_scenario, generate

__version__ = "0.1.0"

__all__ = [
    "AggregationSpec",
    "AnomalyFlag",
    "BaselinePattern",
    "Bucket",
    "DatasetSnapshot",
    "ExpectationConfig",
    "ExpectationMethod",
    "Flow",
    "FlowSeries",
    "Granularity",
    "GroundTruth",
    "IngestError",
    "Injection",
    "IntermediaryRankingRow",
    "IntervalId",
    "Path",
    "PathTableRow",
    "PseudonymMap",
    "RankingResult",
    "RowError",
    "ScenarioConfig",
    "TemporalNetwork",
    "TransactionRecord",
    "brute_force_paths",
    "bucket_of",
    "build_flow",
    "build_networks",
    "count_calls",
    "ewma",
    "fan_scenario",
    "find_paths",
    "flag_anomalies",
    "flow_series",
    "flow_through",
    "flow_weight",
    "generate",
    "iter_paths",
    "normalize_series",
    "parse_transactions",
    "path_min",
    "path_table_rows",
    "path_weight",
    "pct_deviation",
    "pseudonymize",
    "rank_intermediaries",
    "serialize_transactions",
    "temporal_feasibility",
    "through_series",
    "wma",
]
