"""
Harness package: strategy comparison on simulator benchmarks
"""
from harness.strategies import (
    AdaptiveStrategy,
    DefaultStrategy,
    ExpertStrategy,
    OfficialStrategy,
    Strategy,
    StrategyResult,
    make_strategy,
    run_strategy,
)
from harness.compare import BenchOutcome, CompareTable, compare, mark_results, write_table

__all__ = [
    "AdaptiveStrategy",
    "DefaultStrategy",
    "ExpertStrategy",
    "OfficialStrategy",
    "Strategy",
    "StrategyResult",
    "make_strategy",
    "run_strategy",
    "BenchOutcome",
    "CompareTable",
    "compare",
    "mark_results",
    "write_table",
]
