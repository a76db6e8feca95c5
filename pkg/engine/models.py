"""
Data models for the tuning engine
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from analyzers.base_analyzer import BaseAnalyzer, ProgramRef
from config import (
    DEFAULT_ALPHA,
    DEFAULT_BETA,
    DEFAULT_JOBS,
    DEFAULT_NUM_REFINE,
    DEFAULT_NUM_SAMPLE,
)
from core.codec import setting_to_json
from core.distributions import DeltaDist, JointDistribution, delta_to_json
from core.lattice import Profile, Setting
from core.outcome import AnalysisOutcome
from services.report_service import ReportService, RoundRecord


class HyperParams(BaseModel):
    """Tuning hyper-parameters"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: float = Field(DEFAULT_ALPHA, gt=0, lt=1, description="Share of the baseline time used as a round floor")
    beta_mode: Literal["fit_series", "literal"] = Field(
        "fit_series", description="fit_series sizes rounds to fill the budget; literal uses beta * T"
    )
    beta: float = Field(DEFAULT_BETA, gt=0, description="Fraction of the budget for the first round in literal mode")
    num_sample: int = Field(DEFAULT_NUM_SAMPLE, ge=1, description="Settings sampled per round")
    num_refine: int = Field(DEFAULT_NUM_REFINE, ge=0, description="Maximum number of rounds")
    jobs: int = Field(DEFAULT_JOBS, ge=1, description="Concurrent analyses")


class Termination(Enum):
    BUDGET_EXHAUSTED = "budget_exhausted"
    REFINE_COUNT_REACHED = "refine_count_reached"
    BASELINE_FAILED = "baseline_failed"


@dataclass
class TuneRequest:
    """Inputs of one tuning run"""
    initial: JointDistribution
    budget_seconds: float
    analyzer: BaseAnalyzer
    program: ProgramRef
    hyper: HyperParams = field(default_factory=HyperParams)
    seed: int = 0
    baseline_timeout: Optional[float] = None
    report: Optional[ReportService] = None

    @property
    def profile(self) -> Profile:
        return self.initial.profile


@dataclass
class RoundReport:
    round_index: int
    round_budget_seconds: float
    sampled: List[Setting]
    outcomes: List[AnalysisOutcome]
    eta: float
    base_after: Setting
    delta_after: List[DeltaDist]
    remaining_budget_seconds: float
    alarms_under_base_after: Optional[int] = None
    anomalies: int = 0

    @property
    def completed(self) -> int:
        return sum(1 for o in self.outcomes if o.is_completed)

    def to_record(self, profile: Profile) -> RoundRecord:
        return RoundRecord(
            round_index=self.round_index,
            round_budget_seconds=self.round_budget_seconds,
            sampled=[setting_to_json(profile, s) for s in self.sampled],
            outcomes=[o.to_dict(setting_to_json(profile, o.setting)) for o in self.outcomes],
            completed=self.completed,
            eta=self.eta,
            base_after=setting_to_json(profile, self.base_after),
            delta_after=[delta_to_json(d) for d in self.delta_after],
            alarms_under_base_after=self.alarms_under_base_after,
            anomalies=self.anomalies,
            remaining_budget_seconds=self.remaining_budget_seconds,
        )


@dataclass
class TuneResult:
    final_setting: Setting
    final_delta: List[DeltaDist]
    a_uni_size: int
    rounds: List[RoundReport]
    termination: Termination
    baseline: AnalysisOutcome
    final_alarm_count: Optional[int] = None
    anomalies: int = 0
    total_wall_time: float = 0.0

    @property
    def identification_time(self) -> float:
        return self.total_wall_time
