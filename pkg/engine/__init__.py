"""
Engine package: the budgeted sample-analyze-refine loop
"""
from engine.models import HyperParams, RoundReport, Termination, TuneRequest, TuneResult
from engine.dispatch import map_analyze
from engine.orchestrator import TuneOrchestrator, extract, initial_round_budget, tune

__all__ = [
    "HyperParams",
    "RoundReport",
    "Termination",
    "TuneRequest",
    "TuneResult",
    "map_analyze",
    "TuneOrchestrator",
    "extract",
    "initial_round_budget",
    "tune",
]
