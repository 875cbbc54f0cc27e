"""On-shelf high-utility sequential pattern mining over temporal q-sequence databases."""

from .ingest import (ConsistencyError, DatasetBundle, GeneratorConfig, ParseError, generate_scaled,
                     loads, parse_database, random_database, running_example, serialize_database,
                     write_database)
from .model import (OT_INTERSECTION, OT_UNION, MinedPattern, Pattern, QItem, QSequence,
                    TemporalDatabase, ThresholdConfig, find_instances, item_utility,
                    on_shelf_periods, q_sequence_utility)
from .oracle import OracleBudgetError, OracleConfig, enumerate_all_patterns, oracle_mine
from .osums import mine_osums
from .osums_plus import mine_osums_plus
from .qmatrix import PeriodicalQMatrix, build_matrices, compute_ptsu
from .report import Limits, MiningAborted, MiningReport

__all__ = [
    "ConsistencyError", "DatasetBundle", "GeneratorConfig", "ParseError", "generate_scaled",
    "loads", "parse_database", "random_database", "running_example", "serialize_database",
    "write_database", "OT_INTERSECTION", "OT_UNION", "MinedPattern", "Pattern", "QItem",
    "QSequence", "TemporalDatabase", "ThresholdConfig", "find_instances", "item_utility",
    "on_shelf_periods", "q_sequence_utility", "OracleBudgetError", "OracleConfig",
    "enumerate_all_patterns", "oracle_mine", "mine_osums", "mine_osums_plus",
    "PeriodicalQMatrix", "build_matrices", "compute_ptsu", "Limits", "MiningAborted",
    "MiningReport",
]
