"""
Round dispatch: analyze a batch of settings within one round budget
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List

from analyzers.base_analyzer import BaseAnalyzer, ProgramRef
from core.errors import ContractViolation
from core.lattice import Setting
from core.outcome import AnalysisOutcome, FailureReason

logger = logging.getLogger(__name__)


@dataclass
class RoundDispatch:
    outcomes: List[AnalysisOutcome]
    span: float  # wall time from round start to the last analysis end


def _not_started(setting: Setting) -> AnalysisOutcome:
    return AnalysisOutcome.failed(setting, FailureReason.TIMEOUT, 0.0, "round budget spent before start")


def _guarded_analyze(analyzer: BaseAnalyzer, prog: ProgramRef, setting: Setting, deadline: float) -> AnalysisOutcome:
    try:
        return analyzer.analyze(prog, setting, deadline)
    except ContractViolation:
        raise
    except Exception as e:
        logger.error(f"Analyzer raised under {setting}: {e}")
        return AnalysisOutcome.failed(setting, FailureReason.CRASH, detail=str(e))


def _dispatch_virtual(prog, settings, round_budget, jobs, analyzer) -> RoundDispatch:
    """Slot scheduler over virtual time; each analysis starts on the earliest free slot"""
    slot_free_at = [0.0] * jobs
    outcomes = []
    for setting in settings:
        slot = min(range(jobs), key=lambda k: slot_free_at[k])
        start = slot_free_at[slot]
        if start >= round_budget:
            outcomes.append(_not_started(setting))
            continue
        outcome = _guarded_analyze(analyzer, prog, setting, round_budget - start)
        slot_free_at[slot] = start + outcome.wall_time
        outcomes.append(outcome)
    return RoundDispatch(outcomes, max(slot_free_at))


def _dispatch_real(prog, settings, round_budget, jobs, analyzer) -> RoundDispatch:
    round_start = time.monotonic()

    def run(setting: Setting) -> AnalysisOutcome:
        remaining = round_budget - (time.monotonic() - round_start)
        if remaining <= 0:
            return _not_started(setting)
        return _guarded_analyze(analyzer, prog, setting, remaining)

    with ThreadPoolExecutor(max_workers=jobs, thread_name_prefix="analyze") as pool:
        outcomes = list(pool.map(run, settings))
    return RoundDispatch(outcomes, time.monotonic() - round_start)


def dispatch_round(
    prog: ProgramRef,
    settings: List[Setting],
    round_budget: float,
    jobs: int,
    analyzer: BaseAnalyzer,
) -> RoundDispatch:
    if not settings:
        raise ContractViolation("map_analyze needs at least one setting")
    if jobs < 1:
        raise ContractViolation(f"jobs must be positive, got {jobs}")
    if math.isnan(round_budget):
        raise ContractViolation("round budget is NaN")

    if analyzer.virtual_time:
        return _dispatch_virtual(prog, settings, round_budget, jobs, analyzer)
    return _dispatch_real(prog, settings, round_budget, jobs, analyzer)


def map_analyze(
    prog: ProgramRef,
    settings: List[Setting],
    round_budget: float,
    jobs: int,
    analyzer: BaseAnalyzer,
) -> List[AnalysisOutcome]:
    """Analyze every setting within round_budget; outcomes keep input order"""
    return dispatch_round(prog, settings, round_budget, jobs, analyzer).outcomes
