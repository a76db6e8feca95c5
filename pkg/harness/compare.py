"""
Strategy comparison over benchmarks and seeds, with best / tied-best marking
"""
import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from analyzers.sim_analyzer import SimBenchmark
from config import TIE_TOLERANCE
from core.errors import ContractViolation
from harness.strategies import Strategy, StrategyResult, run_strategy

logger = logging.getLogger(__name__)

EXCLUSIVE_BEST = "best"
TIED_BEST = "tied"


def mark_results(counts: Dict[str, Optional[int]], tolerance: float = TIE_TOLERANCE) -> Dict[str, str]:
    """
    Mark the strategies with the fewest alarms

    A result is tied-best when count - min <= tolerance * count; if it is the
    only such result it is exclusively best. Missing counts are never marked.
    """
    known = {name: c for name, c in counts.items() if c is not None}
    marks = {name: "" for name in counts}
    if not known:
        return marks

    least = min(known.values())
    tied = [name for name, c in known.items() if c - least <= tolerance * c]
    label = EXCLUSIVE_BEST if len(tied) == 1 else TIED_BEST
    for name in tied:
        marks[name] = label
    return marks


@dataclass
class BenchOutcome:
    """One (benchmark, seed) row of the comparison"""
    bench: SimBenchmark
    seed: int
    results: Dict[str, StrategyResult]
    marks: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.marks:
            self.marks = mark_results({name: r.alarm_count for name, r in self.results.items()})

    def rows(self) -> List[Dict]:
        return [
            {
                "benchmark": self.bench.id,
                "seed": self.seed,
                "mark": self.marks.get(name, ""),
                **result.to_dict(self.bench),
            }
            for name, result in self.results.items()
        ]


@dataclass
class CompareTable:
    outcomes: List[BenchOutcome]
    strategies: List[str]

    def summary(self) -> Dict[str, Dict[str, int]]:
        """Per strategy: exclusively best, tied-best, and their sum"""
        summary = {name: {"best": 0, "tied": 0, "overall": 0} for name in self.strategies}
        for outcome in self.outcomes:
            for name, mark in outcome.marks.items():
                if mark == EXCLUSIVE_BEST:
                    summary[name]["best"] += 1
                elif mark == TIED_BEST:
                    summary[name]["tied"] += 1
                if mark:
                    summary[name]["overall"] += 1
        return summary

    def rows(self) -> List[Dict]:
        return [row for outcome in self.outcomes for row in outcome.rows()]


def compare(
    benchmarks: Sequence[SimBenchmark],
    strategies: Sequence[Strategy],
    budget: float,
    seeds: Sequence[int],
    jobs: int = 1,
) -> CompareTable:
    """Run every strategy on every (benchmark, seed) cell; cells are independent"""
    if not benchmarks or not strategies or not seeds:
        raise ContractViolation("compare needs at least one benchmark, strategy and seed")
    names = [s.name for s in strategies]
    if len(set(names)) != len(names):
        raise ContractViolation(f"duplicate strategy names: {names}")

    cells: List[Tuple[SimBenchmark, int]] = [(b, s) for b in benchmarks for s in seeds]

    def run_cell(cell: Tuple[SimBenchmark, int]) -> BenchOutcome:
        bench, seed = cell
        results = {s.name: run_strategy(s, bench, budget, seed) for s in strategies}
        return BenchOutcome(bench, seed, results)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run_cell, cells))
    else:
        outcomes = [run_cell(cell) for cell in cells]

    table = CompareTable(outcomes, names)
    logger.info(f"Compared {len(names)} strategies on {len(cells)} cells: {table.summary()}")
    return table


# =============================================================================
# OUTPUT
# =============================================================================

CSV_COLUMNS = [
    "benchmark",
    "seed",
    "strategy",
    "alarm_count",
    "identification_time",
    "analysis_time",
    "mark",
    "final_setting",
]


def write_csv(table: CompareTable, path: Path):
    with Path(path).open("w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in table.rows():
            row = dict(row)
            row["final_setting"] = json.dumps(row["final_setting"], sort_keys=True)
            writer.writerow(row)


def write_jsonl(table: CompareTable, path: Path):
    with Path(path).open("w", encoding="utf-8") as f:
        for row in table.rows():
            f.write(json.dumps({"record_type": "bench_row", **row}, sort_keys=True) + "\n")
        f.write(json.dumps({"record_type": "bench_summary", "summary": table.summary()}, sort_keys=True) + "\n")


def write_table(table: CompareTable, path: Path):
    """Write as CSV or JSONL depending on the suffix"""
    path = Path(path)
    if path.suffix == ".csv":
        write_csv(table, path)
    elif path.suffix == ".jsonl":
        write_jsonl(table, path)
    else:
        raise ContractViolation(f"unsupported table format '{path.suffix}'; use .csv or .jsonl")
