"""
Parameter-selection strategies compared on simulator benchmarks
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

from analyzers.sim_analyzer import SimBenchmark, SimulatedAnalyzer, diagonal_ladder, sim_analyze
from config import EXPERT_LADDER_STEPS
from core.codec import setting_from_json, setting_to_json
from core.errors import ContractViolation
from core.lattice import Setting, setting_leq
from engine.models import HyperParams, TuneRequest
from engine.orchestrator import tune

logger = logging.getLogger(__name__)


@dataclass
class StrategyResult:
    strategy: str
    final_setting: Optional[Setting]
    alarm_count: Optional[int]        # None when no analysis completed
    identification_time: float        # time spent choosing the setting
    analysis_time: float              # time of the analysis under the chosen setting

    def to_dict(self, bench: SimBenchmark) -> Dict[str, Any]:
        return {
            "strategy": self.strategy,
            "final_setting": (
                setting_to_json(bench.model.profile, self.final_setting) if self.final_setting else None
            ),
            "alarm_count": self.alarm_count,
            "identification_time": self.identification_time,
            "analysis_time": self.analysis_time,
        }


class Strategy(ABC):
    name: str = ""

    @abstractmethod
    def run(self, bench: SimBenchmark, budget: float, seed: int) -> StrategyResult:
        pass


class DefaultStrategy(Strategy):
    """One analysis under the benchmark's default base"""
    name = "default"

    def run(self, bench: SimBenchmark, budget: float, seed: int) -> StrategyResult:
        base = bench.initial.base
        outcome = sim_analyze(bench.model, base, budget)
        count = len(outcome.alarms) if outcome.is_completed else None
        return StrategyResult(self.name, base, count, 0.0, outcome.wall_time)


def check_ladder(ladder: Sequence[Setting]):
    if not ladder:
        raise ContractViolation("expert ladder is empty")
    for lower, upper in zip(ladder, ladder[1:]):
        if not setting_leq(lower, upper) or lower == upper:
            raise ContractViolation(f"expert ladder does not strictly increase between {lower} and {upper}")


class ExpertStrategy(Strategy):
    """
    Climb a precision ladder until the budget runs out

    Each rung may use whatever budget is left; the result is the alarm set
    of the highest rung that completed. Without an explicit ladder the
    diagonal ladder of the benchmark's profile is used.
    """
    name = "expert"

    def __init__(self, ladder: Optional[Sequence[Setting]] = None, steps: int = EXPERT_LADDER_STEPS):
        if ladder is not None:
            check_ladder(ladder)
        self.ladder = list(ladder) if ladder is not None else None
        self.steps = steps

    def ladder_for(self, bench: SimBenchmark) -> List[Setting]:
        if self.ladder is not None:
            return self.ladder
        max_threshold = int(bench.knobs.get("max_threshold", 20))
        return diagonal_ladder(bench.model.profile, max_threshold, self.steps)

    def run(self, bench: SimBenchmark, budget: float, seed: int) -> StrategyResult:
        remaining = budget
        spent = 0.0
        best = None
        for rung, setting in enumerate(self.ladder_for(bench)):
            if remaining <= 0:
                logger.debug(f"Expert stops before rung {rung}: budget spent")
                break
            outcome = sim_analyze(bench.model, setting, remaining)
            remaining -= outcome.wall_time
            spent += outcome.wall_time
            if outcome.is_completed:
                best = outcome

        if best is None:
            return StrategyResult(self.name, None, None, spent, 0.0)
        return StrategyResult(self.name, best.setting, len(best.alarms), spent, best.wall_time)


class OfficialStrategy(ExpertStrategy):
    """
    Expert climb over user-supplied settings

    ladders maps a benchmark id to its list of setting objects; a bare list
    applies to every benchmark. A single setting per benchmark reproduces a
    recommended configuration.
    """
    name = "official"

    def __init__(self, ladders: Union[Sequence[Mapping[str, Any]], Mapping[str, Sequence[Mapping[str, Any]]]]):
        super().__init__()
        self.ladders = ladders

    def ladder_for(self, bench: SimBenchmark) -> List[Setting]:
        raw = self.ladders.get(bench.id) if isinstance(self.ladders, Mapping) else self.ladders
        if raw is None:
            raise ContractViolation(f"no official settings for benchmark '{bench.id}'")
        ladder = [setting_from_json(bench.model.profile, item) for item in raw]
        check_ladder(ladder)
        return ladder


class AdaptiveStrategy(Strategy):
    """
    Distribution refinement followed by one scoring analysis

    With repeats > 1 the tuning runs several times (each on budget / repeats
    when split_budget is set) and the best final setting is kept.
    """
    name = "adaptive"

    def __init__(self, hyper: Optional[HyperParams] = None, repeats: int = 1, split_budget: bool = False):
        if repeats < 1:
            raise ContractViolation(f"repeats must be positive, got {repeats}")
        self.hyper = hyper or HyperParams()
        self.repeats = repeats
        self.split_budget = split_budget

    def run(self, bench: SimBenchmark, budget: float, seed: int) -> StrategyResult:
        run_budget = budget / self.repeats if self.split_budget else budget
        best: Optional[StrategyResult] = None
        identification = 0.0

        for r in range(self.repeats):
            result = tune(TuneRequest(
                initial=bench.initial,
                budget_seconds=run_budget,
                analyzer=SimulatedAnalyzer(bench.model),
                program=bench.program,
                hyper=self.hyper,
                seed=seed + r * 1_000_003,
            ))
            identification += result.total_wall_time
            scoring = sim_analyze(bench.model, result.final_setting, math.inf)
            if not scoring.is_completed:
                logger.warning(f"{bench.id}: scoring analysis failed under {result.final_setting}")
                continue
            candidate = StrategyResult(
                self.name, result.final_setting, len(scoring.alarms), 0.0, scoring.wall_time
            )
            if best is None or candidate.alarm_count < best.alarm_count:
                best = candidate

        if best is None:
            return StrategyResult(self.name, None, None, identification, 0.0)
        best.identification_time = identification
        return best


def run_strategy(strategy: Strategy, bench: SimBenchmark, budget: float, seed: int) -> StrategyResult:
    result = strategy.run(bench, budget, seed)
    logger.info(f"{bench.id} seed {seed}: {strategy.name} -> {result.alarm_count} alarm(s)")
    return result


def make_strategy(name: str, hyper: Optional[HyperParams] = None, repeats: int = 1, split_budget: bool = False) -> Strategy:
    if name == "default":
        return DefaultStrategy()
    if name == "expert":
        return ExpertStrategy()
    if name == "adaptive":
        return AdaptiveStrategy(hyper, repeats, split_budget)
    raise ContractViolation(f"unknown strategy '{name}'")
