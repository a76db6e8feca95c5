"""
Core package: latticed parameter spaces, distributions and refinement
"""
from core.errors import ConfigError, ContractViolation, ExtractionError, RenderError, TunerError
from core.lattice import (
    INFINITY,
    BitsValue,
    BoolValue,
    EnumValue,
    IntValue,
    ParamKind,
    ParamSpec,
    ParamType,
    Setting,
)
from core.distributions import (
    Bernoulli,
    JointBernoulli,
    JointDistribution,
    ParamDistribution,
    Poisson,
)
from core.outcome import AnalysisOutcome, FailureReason, OutcomeStatus
from core.refinement import RefineInput, refine

__all__ = [
    # Errors
    "TunerError",
    "ContractViolation",
    "RenderError",
    "ConfigError",
    "ExtractionError",
    # Lattices
    "INFINITY",
    "IntValue",
    "BoolValue",
    "EnumValue",
    "BitsValue",
    "ParamKind",
    "ParamType",
    "ParamSpec",
    "Setting",
    # Distributions
    "Poisson",
    "Bernoulli",
    "JointBernoulli",
    "ParamDistribution",
    "JointDistribution",
    # Outcomes and refinement
    "AnalysisOutcome",
    "OutcomeStatus",
    "FailureReason",
    "RefineInput",
    "refine",
]
