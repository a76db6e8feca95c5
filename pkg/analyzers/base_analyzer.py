"""
Base Analyzer class for the Lattice Parameter Tuner
Every analyzer the engine can drive inherits from this base class
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple, Type

from core.lattice import Profile, Setting
from core.outcome import AnalysisOutcome


class AnalyzerKind(Enum):
    """Types of analyzers the engine can drive"""
    EXTERNAL = "external"
    SIMULATED = "simulated"


@dataclass(frozen=True)
class ProgramRef:
    """The program under analysis: source paths, or a simulator benchmark id"""
    identifier: str
    source_paths: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "source_paths", tuple(str(p) for p in self.source_paths))


class BaseAnalyzer(ABC):
    """
    Base class for all analyzers

    Provides:
    - A named logger per analyzer kind
    - The analyze contract: failures are encoded in the outcome, never raised
    - Whether wall time is virtual (simulated) or measured
    """

    # Simulated analyzers report deterministic costs instead of elapsed time
    virtual_time: bool = False

    def __init__(self, kind: AnalyzerKind, profile: Profile):
        self.kind = kind
        self.profile = profile
        self.logger = logging.getLogger(f"analyzer.{kind.value}")

    @abstractmethod
    def analyze(self, prog: ProgramRef, setting: Setting, deadline: float) -> AnalysisOutcome:
        """
        Analyze prog under setting

        Args:
            prog: Program to analyze
            setting: Parameter setting, aligned with self.profile
            deadline: Wall-clock cap in seconds (may be inf)

        Returns:
            Completed outcome with the alarm set, or Failed with a reason
        """
        pass

    def render(self, setting: Setting, prog: Optional[ProgramRef] = None) -> List[str]:
        """Analyzer invocation for a setting; empty when there is no command line"""
        return []

    def alarm_count(self, setting: Setting) -> Optional[int]:
        """Alarm count known without running an analysis, or None"""
        return None

    def log_action(self, action: str, details: Optional[Dict] = None):
        """Log an analyzer action"""
        self.logger.info(f"[{self.kind.value}] {action}")
        if details:
            self.logger.debug(f"Details: {details}")


class AnalyzerRegistry:
    """
    Registry of analyzer classes by kind
    Lets configs name an analyzer without importing its module
    """

    _analyzers: Dict[AnalyzerKind, Type[BaseAnalyzer]] = {}

    @classmethod
    def register(cls, kind: AnalyzerKind):
        """Class decorator registering an analyzer implementation"""
        def decorator(analyzer_cls: Type[BaseAnalyzer]) -> Type[BaseAnalyzer]:
            cls._analyzers[kind] = analyzer_cls
            logging.debug(f"Registered analyzer: {kind.value}")
            return analyzer_cls
        return decorator

    @classmethod
    def get(cls, kind: AnalyzerKind) -> Optional[Type[BaseAnalyzer]]:
        return cls._analyzers.get(kind)

    @classmethod
    def create(cls, kind: AnalyzerKind, *args, **kwargs) -> BaseAnalyzer:
        analyzer_cls = cls.get(kind)
        if analyzer_cls is None:
            raise KeyError(f"No analyzer registered for kind '{kind.value}'")
        return analyzer_cls(*args, **kwargs)
