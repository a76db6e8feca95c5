"""
Tuning configuration schema and the step from a validated config to a TuneRequest
"""
import glob
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from analyzers.base_analyzer import AnalyzerKind, AnalyzerRegistry, BaseAnalyzer, ProgramRef
from analyzers.external_analyzer import render_command
from analyzers.profile import AnalyzerProfile
from analyzers.sim_analyzer import (
    BenchKnobs,
    SimBenchmark,
    gen_benchmark,
    gen_skewed_benchmark,
)
from config import CONFIG_SCHEMA_VERSION, DEFAULT_SEED
from core.codec import distribution_from_json, profile_from_json
from core.distributions import JointDistribution
from core.errors import ConfigError, ContractViolation, RenderError
from core.lattice import Profile
from engine.models import HyperParams, TuneRequest
from services.report_service import ReportService

logger = logging.getLogger(__name__)


# =============================================================================
# CONFIG MODELS
# =============================================================================

class ParamSpecConfig(BaseModel):
    """One analyzer parameter"""
    model_config = ConfigDict(extra="forbid")

    name: str = Field(..., min_length=1, description="Parameter name, unique in the profile")
    type: Literal["integer", "boolean", "ordered_enum", "string_set"]
    labels: Optional[List[str]] = Field(None, description="Ordered labels of an ordered_enum, least precise first")
    members: Optional[List[str]] = Field(None, description="Members of a string_set, in bit order")


class DeltaConfig(BaseModel):
    """Delta distribution family and its parameters"""
    model_config = ConfigDict(extra="forbid")

    family: Literal["poisson", "bernoulli", "joint_bernoulli"]
    lam: Optional[float] = Field(None, description="Poisson rate")
    q: Optional[float] = Field(None, description="Bernoulli probability")
    qs: Optional[List[float]] = Field(None, description="Per-member Bernoulli probabilities")

    @model_validator(mode="after")
    def check_parameters(self) -> "DeltaConfig":
        needed = {"poisson": "lam", "bernoulli": "q", "joint_bernoulli": "qs"}[self.family]
        if getattr(self, needed) is None:
            raise ValueError(f"{self.family} delta needs '{needed}'")
        return self


class DistributionEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    base: Any = Field(..., description="Base value: integer, 0/1, enum label or set member list")
    delta: DeltaConfig


class ProgramConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    identifier: str = Field("program", description="Name used for {program} and in logs")
    source_paths: List[str] = Field(default_factory=list, description="Source files or glob patterns")


class ExternalAnalyzerConfig(AnalyzerProfile):
    """A real analyzer driven through its command line"""
    kind: Literal["external"] = "external"


class GenerateConfig(BaseModel):
    """Generate a simulator benchmark instead of loading one"""
    model_config = ConfigDict(extra="forbid")

    family: Literal["uniform", "skewed"] = "uniform"
    seed: int = Field(0, ge=0)
    n_params: int = Field(2, ge=1)
    n_alarms: int = Field(6, ge=0)
    max_threshold: int = Field(20, ge=1)
    cost_scale: float = Field(1.0, gt=0)
    non_principal: bool = False

    def build(self) -> SimBenchmark:
        if self.family == "skewed":
            return gen_skewed_benchmark(self.seed, self.cost_scale)
        return gen_benchmark(self.seed, BenchKnobs(
            n_params=self.n_params,
            n_alarms=self.n_alarms,
            max_threshold=self.max_threshold,
            cost_scale=self.cost_scale,
            non_principal=self.non_principal,
        ))


class SimulatedAnalyzerConfig(BaseModel):
    """The analyzer simulator, on a benchmark file or a generated benchmark"""
    model_config = ConfigDict(extra="forbid")

    kind: Literal["simulated"] = "simulated"
    benchmark: Optional[str] = Field(None, description="Benchmark JSON path, relative to the config file")
    generate: Optional[GenerateConfig] = None

    @model_validator(mode="after")
    def check_source(self) -> "SimulatedAnalyzerConfig":
        if (self.benchmark is None) == (self.generate is None):
            raise ValueError("give exactly one of 'benchmark' or 'generate'")
        return self


AnalyzerConfig = Annotated[Union[ExternalAnalyzerConfig, SimulatedAnalyzerConfig], Field(discriminator="kind")]


class TuneConfig(BaseModel):
    """A complete tuning configuration file"""
    model_config = ConfigDict(extra="forbid")

    schema_version: int = Field(CONFIG_SCHEMA_VERSION, description="Config schema version")
    name: str = Field("", description="Human-readable config name")
    description: str = ""
    analyzer: AnalyzerConfig
    program: Optional[ProgramConfig] = None
    profile: Optional[List[ParamSpecConfig]] = Field(
        None, description="Parameter profile; simulator configs default to the benchmark's"
    )
    initial_distribution: Optional[Dict[str, DistributionEntry]] = Field(
        None, description="Per-parameter base and delta; simulator configs default to the benchmark's"
    )
    hyper: HyperParams = Field(default_factory=HyperParams)
    budget_seconds: float = Field(..., gt=0, description="Total tuning budget T")
    seed: int = Field(DEFAULT_SEED, ge=0)
    baseline_timeout: Optional[float] = Field(None, gt=0, description="Cap on the baseline analysis; unlimited when unset")
    report_path: Optional[str] = Field(None, description="JSONL report file")

    @field_validator("schema_version")
    @classmethod
    def check_schema_version(cls, version: int) -> int:
        if version != CONFIG_SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {version}; expected {CONFIG_SCHEMA_VERSION}")
        return version

    @model_validator(mode="after")
    def check_external_sections(self) -> "TuneConfig":
        if isinstance(self.analyzer, ExternalAnalyzerConfig):
            missing = [s for s in ("profile", "initial_distribution", "program") if getattr(self, s) is None]
            if missing:
                raise ValueError(f"external analyzer configs need {missing}")
        return self


def canonical_config(config: TuneConfig) -> Dict[str, Any]:
    """JSON form of a config; parsing it back gives an equal config"""
    return config.model_dump(mode="json", exclude_none=True)


def _error_from_validation(e: ValidationError) -> ConfigError:
    """Name the first offending field; list the rest in the message"""
    errors = e.errors()
    first = errors[0]
    field = ".".join(str(part) for part in first["loc"])
    others = [f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in errors[1:]]
    return ConfigError("; ".join([first["msg"], *others]), field or "<root>")


def parse_config(data: Any) -> TuneConfig:
    try:
        return TuneConfig.model_validate(data)
    except ValidationError as e:
        raise _error_from_validation(e) from e


def load_config(path: Union[str, Path]) -> TuneConfig:
    """Read and schema-validate a config file"""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}", "<file>") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}", "<file>") from e
    return parse_config(data)


# =============================================================================
# SEMANTIC BUILD
# =============================================================================

@dataclass
class TuneSetup:
    """A config resolved into the engine's objects"""
    config: TuneConfig
    profile: Profile
    initial: JointDistribution
    analyzer: BaseAnalyzer
    program: ProgramRef
    benchmark: Optional[SimBenchmark] = None

    def request(
        self,
        budget: Optional[float] = None,
        seed: Optional[int] = None,
        jobs: Optional[int] = None,
        report: Optional[ReportService] = None,
    ) -> TuneRequest:
        """Apply command-line overrides on top of the config"""
        hyper = self.config.hyper
        if jobs is not None:
            try:
                hyper = HyperParams.model_validate({**hyper.model_dump(), "jobs": jobs})
            except ValidationError as e:
                raise _error_from_validation(e) from e
        if budget is not None and not budget > 0:
            raise ConfigError(f"budget must be positive, got {budget}", "budget_seconds")
        return TuneRequest(
            initial=self.initial,
            budget_seconds=budget if budget is not None else self.config.budget_seconds,
            analyzer=self.analyzer,
            program=self.program,
            hyper=hyper,
            seed=seed if seed is not None else self.config.seed,
            baseline_timeout=self.config.baseline_timeout,
            report=report,
        )


def _load_benchmark(path: Path) -> SimBenchmark:
    try:
        return SimBenchmark.from_dict(json.loads(path.read_text(encoding="utf-8")))
    except OSError as e:
        raise ConfigError(f"cannot read benchmark {path}: {e}", "analyzer.benchmark") from e
    except (ValueError, KeyError, TypeError) as e:
        raise ConfigError(f"invalid benchmark {path}: {e}", "analyzer.benchmark") from e


def _resolve_sources(patterns: List[str], base_dir: Path) -> List[str]:
    """Expand globs relative to the config directory; unmatched entries stay literal"""
    paths = []
    for pattern in patterns:
        full = pattern if Path(pattern).is_absolute() else str(base_dir / pattern)
        matches = sorted(glob.glob(full))
        paths.extend(matches or [full])
    return paths


def _profile(config: TuneConfig) -> Optional[Profile]:
    if config.profile is None:
        return None
    try:
        return profile_from_json([spec.model_dump(exclude_none=True) for spec in config.profile])
    except ContractViolation as e:
        raise ConfigError(str(e), "profile") from e


def _distribution(profile: Profile, entries: Dict[str, DistributionEntry]) -> JointDistribution:
    try:
        return distribution_from_json(
            profile, {name: entry.model_dump(exclude_none=True) for name, entry in entries.items()}
        )
    except ContractViolation as e:
        raise ConfigError(str(e), "initial_distribution") from e


def build_setup(config: TuneConfig, base_dir: Union[str, Path] = ".") -> TuneSetup:
    """
    Semantic validation: delta families, rendering coverage, benchmark files

    Nothing is spawned; an external analyzer's command is rendered once for
    the initial base to prove every parameter can be put on the command line.
    """
    base_dir = Path(base_dir)
    profile = _profile(config)

    if isinstance(config.analyzer, SimulatedAnalyzerConfig):
        if config.analyzer.generate is not None:
            try:
                bench = config.analyzer.generate.build()
            except ContractViolation as e:
                raise ConfigError(str(e), "analyzer.generate") from e
        else:
            bench = _load_benchmark(base_dir / config.analyzer.benchmark)

        if profile is not None and profile != bench.model.profile:
            raise ConfigError("profile does not match the benchmark's parameters", "profile")
        profile = bench.model.profile
        initial = (
            _distribution(profile, config.initial_distribution)
            if config.initial_distribution is not None
            else bench.initial
        )
        program = bench.program
        if config.program is not None:
            program = ProgramRef(config.program.identifier, _resolve_sources(config.program.source_paths, base_dir))
        analyzer = AnalyzerRegistry.create(AnalyzerKind(config.analyzer.kind), bench.model)
        return TuneSetup(config, profile, initial, analyzer, program, bench)

    initial = _distribution(profile, config.initial_distribution)
    program = ProgramRef(config.program.identifier, _resolve_sources(config.program.source_paths, base_dir))
    analyzer = AnalyzerRegistry.create(AnalyzerKind(config.analyzer.kind), profile, config.analyzer)
    try:
        render_command(config.analyzer, profile, program, initial.base)
    except RenderError as e:
        raise ConfigError(str(e), "analyzer.command_template") from e
    return TuneSetup(config, profile, initial, analyzer, program)


def load_setup(path: Union[str, Path]) -> TuneSetup:
    """load_config followed by build_setup, relative to the config's directory"""
    path = Path(path)
    return build_setup(load_config(path), path.parent)
