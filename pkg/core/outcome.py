"""
Results of single analyzer invocations
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, Optional

from core.lattice import Setting

# Canonical alarm text; equality is exact string equality
AlarmId = str


class OutcomeStatus(Enum):
    COMPLETED = "completed"
    FAILED = "failed"


class FailureReason(Enum):
    """Why an analysis produced no usable alarm set"""
    TIMEOUT = "timeout"
    CRASH = "crash"
    PARSE_ERROR = "parse_error"


@dataclass(frozen=True)
class AnalysisOutcome:
    """
    A pair of a setting and what the analyzer reported for it

    Completed outcomes carry the alarm set; failed ones carry a reason and an
    optional diagnostic. wall_time is recorded either way so the engine can
    account for it.
    """
    setting: Setting
    status: OutcomeStatus
    alarms: FrozenSet[AlarmId] = field(default_factory=frozenset)
    wall_time: float = 0.0
    reason: Optional[FailureReason] = None
    detail: str = ""

    @classmethod
    def completed(cls, setting: Setting, alarms: Iterable[AlarmId], wall_time: float) -> "AnalysisOutcome":
        return cls(setting, OutcomeStatus.COMPLETED, frozenset(alarms), float(wall_time))

    @classmethod
    def failed(
        cls,
        setting: Setting,
        reason: FailureReason,
        wall_time: float = 0.0,
        detail: str = "",
    ) -> "AnalysisOutcome":
        return cls(setting, OutcomeStatus.FAILED, frozenset(), float(wall_time), reason, detail)

    @property
    def is_completed(self) -> bool:
        return self.status == OutcomeStatus.COMPLETED

    def restricted_to(self, universe: FrozenSet[AlarmId]) -> "AnalysisOutcome":
        """Drop alarms outside the universe; failed outcomes are returned unchanged"""
        if not self.is_completed:
            return self
        return AnalysisOutcome.completed(self.setting, self.alarms & universe, self.wall_time)

    def to_dict(self, setting_json: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        data = {
            "setting": setting_json if setting_json is not None else str(self.setting),
            "status": self.status.value,
            "wall_time": self.wall_time,
        }
        if self.is_completed:
            data["alarms"] = sorted(self.alarms)
        else:
            data["reason"] = self.reason.value
            if self.detail:
                data["detail"] = self.detail
        return data
