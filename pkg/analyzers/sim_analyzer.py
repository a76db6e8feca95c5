"""
Simulated analyzer
A deterministic, monotone stand-in for a real analyzer: an alarm disappears once
the setting dominates one of its thresholds, and cost grows with precision
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from analyzers.base_analyzer import AnalyzerKind, AnalyzerRegistry, BaseAnalyzer, ProgramRef
from core.codec import (
    distribution_from_json,
    distribution_to_json,
    profile_from_json,
    profile_to_json,
    setting_from_json,
    setting_to_json,
)
from core.distributions import Bernoulli, JointDistribution, Poisson, make_rng
from core.errors import ContractViolation, RenderError
from core.lattice import (
    BitsValue,
    BoolValue,
    EnumValue,
    IntValue,
    ParamKind,
    ParamSpec,
    ParamType,
    ParamValue,
    Profile,
    Setting,
    bottom_setting,
    check_setting,
    make_profile,
    setting_leq,
)
from core.outcome import AlarmId, AnalysisOutcome, FailureReason


@dataclass(frozen=True)
class SimAlarm:
    """An alarm eliminated by any setting above one of its thresholds"""
    alarm_id: AlarmId
    thresholds: Tuple[Setting, ...]

    def __post_init__(self):
        object.__setattr__(self, "thresholds", tuple(self.thresholds))
        if not self.thresholds:
            raise ContractViolation(f"alarm '{self.alarm_id}' needs at least one threshold")
        for t in self.thresholds:
            if t.has_infinity():
                raise ContractViolation(f"alarm '{self.alarm_id}' has an infinite threshold {t}")

    def eliminated_by(self, setting: Setting) -> bool:
        return any(setting_leq(t, setting) for t in self.thresholds)


def magnitude(value: ParamValue) -> float:
    if isinstance(value, IntValue):
        return math.inf if value.is_infinite else float(value.v)
    if isinstance(value, BoolValue):
        return float(value.b)
    if isinstance(value, EnumValue):
        return float(value.i)
    return float(value.popcount())


@dataclass(frozen=True)
class SimModel:
    profile: Profile
    alarms: Tuple[SimAlarm, ...]
    base_cost: float
    cost_weights: Tuple[float, ...]
    failure_cap: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "profile", make_profile(self.profile))
        object.__setattr__(self, "alarms", tuple(self.alarms))
        object.__setattr__(self, "cost_weights", tuple(float(w) for w in self.cost_weights))

        if not self.base_cost > 0:
            raise ContractViolation(f"base cost must be positive, got {self.base_cost}")
        if len(self.cost_weights) != len(self.profile):
            raise ContractViolation(
                f"{len(self.cost_weights)} cost weights for {len(self.profile)} parameters"
            )
        if any(w < 0 for w in self.cost_weights):
            raise ContractViolation("cost weights must be non-negative")
        if self.failure_cap is not None and not self.failure_cap > 0:
            raise ContractViolation(f"failure cap must be positive, got {self.failure_cap}")
        ids = [a.alarm_id for a in self.alarms]
        if len(set(ids)) != len(ids):
            raise ContractViolation("duplicate alarm ids in simulator model")
        for alarm in self.alarms:
            for t in alarm.thresholds:
                check_setting(self.profile, t)

    @property
    def universe(self) -> FrozenSet[AlarmId]:
        return frozenset(a.alarm_id for a in self.alarms)

    def cost(self, setting: Setting) -> float:
        """base_cost * prod(1 + w_i * magnitude_i); monotone in the lattice order"""
        total = self.base_cost
        for w, value in zip(self.cost_weights, setting):
            if w:
                total *= 1.0 + w * magnitude(value)
        return total

    def alarms_under(self, setting: Setting) -> FrozenSet[AlarmId]:
        check_setting(self.profile, setting)
        return frozenset(a.alarm_id for a in self.alarms if not a.eliminated_by(setting))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "profile": profile_to_json(self.profile),
            "alarms": [
                {"id": a.alarm_id, "thresholds": [setting_to_json(self.profile, t) for t in a.thresholds]}
                for a in self.alarms
            ],
            "base_cost": self.base_cost,
            "cost_weights": list(self.cost_weights),
            "failure_cap": self.failure_cap,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SimModel":
        profile = profile_from_json(data["profile"])
        alarms = tuple(
            SimAlarm(a["id"], tuple(setting_from_json(profile, t) for t in a["thresholds"]))
            for a in data.get("alarms", [])
        )
        return cls(profile, alarms, float(data["base_cost"]), tuple(data["cost_weights"]), data.get("failure_cap"))


def sim_analyze(model: SimModel, setting: Setting, deadline: float) -> AnalysisOutcome:
    """
    Completed iff cost <= deadline and cost <= failure cap

    Wall time is the virtual cost; a failed run is charged up to its deadline.
    """
    alarms = model.alarms_under(setting)
    cost = model.cost(setting)
    over_cap = model.failure_cap is not None and cost > model.failure_cap
    if cost <= deadline and not over_cap:
        return AnalysisOutcome.completed(setting, alarms, cost)
    return AnalysisOutcome.failed(setting, FailureReason.TIMEOUT, min(cost, deadline))


# =============================================================================
# BENCHMARKS
# =============================================================================

@dataclass(frozen=True)
class BenchKnobs:
    n_params: int = 2
    n_alarms: int = 6
    max_threshold: int = 20
    cost_scale: float = 1.0
    non_principal: bool = False

    def __post_init__(self):
        if self.n_params < 1 or self.n_alarms < 0 or self.max_threshold < 1 or not self.cost_scale > 0:
            raise ContractViolation(f"benchmark knobs must be positive: {self}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_params": self.n_params,
            "n_alarms": self.n_alarms,
            "max_threshold": self.max_threshold,
            "cost_scale": self.cost_scale,
            "non_principal": self.non_principal,
        }


@dataclass(frozen=True)
class SimBenchmark:
    """A simulator model plus what regenerates it and how tuning should start"""
    id: str
    model: SimModel
    initial: JointDistribution
    gen_seed: int = 0
    family: str = "uniform"
    knobs: Dict[str, Any] = field(default_factory=dict)

    @property
    def program(self) -> ProgramRef:
        return ProgramRef(self.id)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "family": self.family,
            "gen_seed": self.gen_seed,
            "knobs": dict(self.knobs),
            "model": self.model.to_dict(),
            "initial_distribution": distribution_to_json(self.initial),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SimBenchmark":
        model = SimModel.from_dict(data["model"])
        return cls(
            id=data["id"],
            model=model,
            initial=distribution_from_json(model.profile, data["initial_distribution"]),
            gen_seed=int(data.get("gen_seed", 0)),
            family=data.get("family", "uniform"),
            knobs=dict(data.get("knobs", {})),
        )


def _int_setting(values: Sequence[int]) -> Setting:
    return Setting.ints(*(int(v) for v in values))


def gen_benchmark(gen_seed: int, knobs: BenchKnobs = BenchKnobs()) -> SimBenchmark:
    """
    Generate an all-integer benchmark deterministically from (seed, knobs)

    Alarm 0 needs a single step on one parameter; alarm 1 needs the maximum
    on one parameter; the rest are uniform in [0, max_threshold].
    """
    rng = make_rng(gen_seed)
    n, m = knobs.n_params, knobs.max_threshold
    profile = make_profile(ParamSpec(f"p{i}", ParamType.integer()) for i in range(n))

    alarms = []
    for index in range(knobs.n_alarms):
        values = [int(x) for x in rng.integers(0, m + 1, size=n)]
        if index == 0:
            values = [0] * n
            values[int(rng.integers(0, n))] = 1
        elif index == 1:
            values[int(rng.integers(0, n))] = m
        thresholds = [_int_setting(values)]
        if knobs.non_principal:
            thresholds.append(_int_setting(rng.integers(0, m + 1, size=n)))
        alarms.append(SimAlarm(f"alarm-{index:03d}", tuple(thresholds)))

    weights = tuple(float(w) for w in rng.uniform(0.01, 0.1, size=n))
    model = SimModel(profile, tuple(alarms), base_cost=knobs.cost_scale, cost_weights=weights)
    initial = JointDistribution.from_parts(
        profile, bottom_setting(profile), [Poisson(max(m / 4.0, 0.5))] * n
    )
    return SimBenchmark(
        id=f"sim-{gen_seed}-n{n}-a{knobs.n_alarms}" + ("-np" if knobs.non_principal else ""),
        model=model,
        initial=initial,
        gen_seed=int(gen_seed),
        family="uniform",
        knobs=knobs.to_dict(),
    )


# Skewed family: one cheap parameter carries every threshold, an expensive decoy carries none
SKEWED_MAX_THRESHOLD = 20
SKEWED_ALARMS = 10
SKEWED_DECOY_WEIGHT = 1000.0
SKEWED_CAP_FACTOR = 100.0


def skewed_budget(base_cost: float = 1.0) -> float:
    """Budget whose first round (FitSeries, 7 rounds) is four base costs"""
    return 127 * 4 * base_cost


def gen_skewed_benchmark(gen_seed: int, base_cost: float = 1.0) -> SimBenchmark:
    """
    Benchmark whose thresholds lie off the diagonal precision ladder

    A ladder that raises every parameter together switches the decoy on
    halfway up and blows the failure cap, while raising p0 alone is cheap.
    """
    rng = make_rng(gen_seed)
    m = SKEWED_MAX_THRESHOLD
    profile = make_profile([
        ParamSpec("p0", ParamType.integer()),
        ParamSpec("decoy", ParamType.boolean()),
    ])
    alarms = tuple(
        SimAlarm(f"alarm-{i:03d}", (Setting.of(IntValue(int(t)), BoolValue(0)),))
        for i, t in enumerate(rng.integers(1, m + 1, size=SKEWED_ALARMS))
    )
    model = SimModel(
        profile,
        alarms,
        base_cost=base_cost,
        cost_weights=(0.5 / m, SKEWED_DECOY_WEIGHT),
        failure_cap=SKEWED_CAP_FACTOR * base_cost,
    )
    initial = JointDistribution.from_parts(
        profile, bottom_setting(profile), [Poisson(m / 2.0), Bernoulli(0.5)]
    )
    return SimBenchmark(
        id=f"skewed-{gen_seed}",
        model=model,
        initial=initial,
        gen_seed=int(gen_seed),
        family="skewed",
        knobs={"max_threshold": m, "n_alarms": SKEWED_ALARMS, "base_cost": base_cost},
    )


def _rung_value(ptype: ParamType, j: int, steps: int, max_threshold: int) -> ParamValue:
    frac = j / (steps - 1) if steps > 1 else 1.0
    if ptype.kind == ParamKind.INTEGER:
        return IntValue(int(round(frac * max_threshold)))
    if ptype.kind == ParamKind.BOOLEAN:
        return BoolValue(1 if 2 * j >= steps else 0)
    if ptype.kind == ParamKind.ORDERED_ENUM:
        return EnumValue(int(round(frac * (ptype.size - 1))))
    count = int(round(frac * ptype.size))
    return BitsValue(tuple(1 if i < count else 0 for i in range(ptype.size)))


def diagonal_ladder(profile: Profile, max_threshold: int, steps: int) -> List[Setting]:
    """Strictly increasing precision ladder raising every parameter together"""
    if steps < 1:
        raise ContractViolation("a ladder needs at least one step")
    ladder: List[Setting] = []
    for j in range(steps):
        rung = Setting(tuple(_rung_value(spec.ptype, j, steps, max_threshold) for spec in profile))
        if not ladder or rung != ladder[-1]:
            ladder.append(rung)
    return ladder


@AnalyzerRegistry.register(AnalyzerKind.SIMULATED)
class SimulatedAnalyzer(BaseAnalyzer):
    virtual_time = True

    def __init__(self, model: SimModel):
        super().__init__(AnalyzerKind.SIMULATED, model.profile)
        self.model = model

    def analyze(self, prog: ProgramRef, setting: Setting, deadline: float) -> AnalysisOutcome:
        return sim_analyze(self.model, setting, deadline)

    def render(self, setting: Setting, prog: Optional[ProgramRef] = None) -> List[str]:
        if setting.has_infinity():
            raise RenderError(f"setting {setting} contains infinity")
        return [f"--{spec.name}={value}" for spec, value in zip(self.profile, setting)]

    def alarm_count(self, setting: Setting) -> int:
        """Alarms under a setting regardless of cost"""
        return len(self.model.alarms_under(setting))
