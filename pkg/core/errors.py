"""
Exception hierarchy for the Lattice Parameter Tuner
"""


class TunerError(ValueError):
    """Base class for all tuner errors"""


class ContractViolation(TunerError):
    """A precondition of a lattice, distribution or refinement operation was broken"""


class RenderError(TunerError):
    """A setting cannot be turned into an analyzer command line"""


class ConfigError(TunerError):
    """A tuning configuration failed semantic validation"""

    def __init__(self, message: str, field: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class ExtractionError(TunerError):
    """Analyzer output could not be turned into an alarm set"""
