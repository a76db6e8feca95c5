"""
Analyzers package for the Lattice Parameter Tuner
"""
from analyzers.base_analyzer import (
    AnalyzerKind,
    AnalyzerRegistry,
    BaseAnalyzer,
    ProgramRef,
)
from analyzers.profile import AnalyzerProfile, ExtractionRule, RenderRule
from analyzers.alarms import AlarmExtractor
from analyzers.external_analyzer import ExternalAnalyzer, render_command
from analyzers.sim_analyzer import (
    BenchKnobs,
    SimAlarm,
    SimBenchmark,
    SimModel,
    SimulatedAnalyzer,
    diagonal_ladder,
    gen_benchmark,
    gen_skewed_benchmark,
    sim_analyze,
)

__all__ = [
    # Base classes
    "AnalyzerKind",
    "AnalyzerRegistry",
    "BaseAnalyzer",
    "ProgramRef",
    # External analyzers
    "AnalyzerProfile",
    "ExtractionRule",
    "RenderRule",
    "AlarmExtractor",
    "ExternalAnalyzer",
    "render_command",
    # Simulator
    "BenchKnobs",
    "SimAlarm",
    "SimBenchmark",
    "SimModel",
    "SimulatedAnalyzer",
    "diagonal_ladder",
    "gen_benchmark",
    "gen_skewed_benchmark",
    "sim_analyze",
]
