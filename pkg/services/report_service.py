"""
Report Service for the Lattice Parameter Tuner
Append-only JSONL records: one baseline record, one per round, one final record
"""
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, TypeAdapter

from config import REPORT_SCHEMA_VERSION

logger = logging.getLogger(__name__)


# =============================================================================
# RECORD MODELS
# =============================================================================

class _Record(BaseModel):
    schema_version: int = Field(REPORT_SCHEMA_VERSION, description="Report schema version")
    timestamp: Optional[str] = Field(None, description="UTC ISO time of emission, omitted with --no-timestamps")


class BaselineRecord(_Record):
    record_type: Literal["baseline"] = "baseline"
    setting: Dict[str, Any] = Field(..., description="Initial base setting")
    status: str = Field(..., description="completed or failed")
    reason: Optional[str] = Field(None, description="Failure reason when the baseline failed")
    a_uni_size: int = Field(0, description="Number of alarms under the initial base")
    time: float = Field(..., description="Baseline wall time in seconds")


class RoundRecord(_Record):
    record_type: Literal["round"] = "round"
    round_index: int
    round_budget_seconds: float
    sampled: List[Dict[str, Any]]
    outcomes: List[Dict[str, Any]]
    completed: int
    eta: float
    base_after: Dict[str, Any]
    delta_after: List[Dict[str, Any]]
    alarms_under_base_after: Optional[int] = None
    anomalies: int = Field(0, description="Alarms outside the baseline universe seen this round")
    remaining_budget_seconds: float


class FinalRecord(_Record):
    record_type: Literal["final"] = "final"
    final_setting: Dict[str, Any]
    argv: List[str] = Field(default_factory=list, description="Analyzer invocation for the final setting")
    final_alarm_count: Optional[int] = None
    a_uni_size: int
    rounds: int
    anomalies: int = 0
    total_wall_time: float
    termination: str


ReportRecord = Annotated[Union[BaselineRecord, RoundRecord, FinalRecord], Field(discriminator="record_type")]
_record_adapter = TypeAdapter(ReportRecord)


# =============================================================================
# SINK
# =============================================================================

class ReportService:
    """
    Writes report records as JSON lines

    Every emitted record is also kept in memory. A write failure is logged
    and reported through the return value; it never stops a tuning run.
    """

    def __init__(self, path: Optional[Union[str, Path]] = None, timestamps: bool = True):
        self.path = Path(path) if path else None
        self.timestamps = timestamps
        self.records: List[Dict[str, Any]] = []

        if self.path is not None:
            try:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                self.path.write_text("")
            except OSError as e:
                logger.error(f"Cannot create report file {self.path}: {e}")
                self.path = None

    def emit(self, record: ReportRecord) -> bool:
        if self.timestamps:
            record = record.model_copy(update={"timestamp": datetime.now(timezone.utc).isoformat()})
        data = record.model_dump(mode="json")
        if not self.timestamps:
            data.pop("timestamp", None)
        self.records.append(data)

        if self.path is None:
            return True
        try:
            with self.path.open("a", encoding="utf-8") as f:
                f.write(json.dumps(data, sort_keys=True) + "\n")
            return True
        except (OSError, TypeError, ValueError) as e:
            logger.warning(f"Error writing {record.record_type} record to {self.path}: {e}")
            return False

    @staticmethod
    def read_records(path: Union[str, Path]) -> List[ReportRecord]:
        """Parse a JSONL report back into typed records; blank lines are skipped"""
        records = []
        with Path(path).open(encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    records.append(_record_adapter.validate_python(json.loads(line)))
        return records
