"""
Services package for the Lattice Parameter Tuner
"""
from services.process_service import ProcessResult, ProcessService
from services.report_service import (
    BaselineRecord,
    FinalRecord,
    ReportService,
    RoundRecord,
)

__all__ = [
    "ProcessResult",
    "ProcessService",
    "BaselineRecord",
    "FinalRecord",
    "ReportService",
    "RoundRecord",
]
