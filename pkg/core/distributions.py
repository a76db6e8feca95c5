"""
Parameter distributions: P = P_base (+) P_delta

The base is a one-point distribution (a lattice element). The delta is an
exploration distribution combined with the base by a rightward shift
(integers, enum indices) or a disjunction (booleans, string-set bits), and
rescaled each round by a positive factor eta.
"""
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np

from core.errors import ContractViolation
from core.lattice import (
    BitsValue,
    BoolValue,
    EnumValue,
    ParamKind,
    ParamSpec,
    ParamValue,
    Profile,
    Setting,
    make_profile,
)


# =============================================================================
# DELTA DISTRIBUTIONS
# =============================================================================

@dataclass(frozen=True)
class Poisson:
    lam: float

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ContractViolation(f"Poisson rate must be a positive finite real, got {self.lam!r}")


@dataclass(frozen=True)
class Bernoulli:
    q: float

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise ContractViolation(f"Bernoulli probability must lie in [0, 1], got {self.q!r}")


@dataclass(frozen=True)
class JointBernoulli:
    qs: Tuple[float, ...]

    def __post_init__(self):
        qs = tuple(float(q) for q in self.qs)
        if not qs:
            raise ContractViolation("joint Bernoulli needs at least one coordinate")
        for q in qs:
            if not 0.0 <= q <= 1.0:
                raise ContractViolation(f"Bernoulli probability must lie in [0, 1], got {q!r}")
        object.__setattr__(self, "qs", qs)


DeltaDist = Union[Poisson, Bernoulli, JointBernoulli]


def _scale_q(eta: float, q: float) -> float:
    return 1.0 - (1.0 - q) ** eta


def scale(eta: float, d: DeltaDist) -> DeltaDist:
    """
    The scaling operator eta (x) delta

    Poisson(l) -> Poisson(eta * l); Bernoulli(q) -> Bernoulli(1 - (1 - q)^eta);
    joint Bernoulli scales point-wise.
    """
    if not eta > 0:
        raise ContractViolation(f"scale factor must be positive, got {eta!r}")
    if eta == 1:
        return d

    if isinstance(d, Poisson):
        return Poisson(eta * d.lam)
    if isinstance(d, Bernoulli):
        return Bernoulli(_scale_q(eta, d.q))
    return JointBernoulli(tuple(_scale_q(eta, q) for q in d.qs))


def expectation(d: DeltaDist) -> Union[float, Tuple[float, ...]]:
    if isinstance(d, Poisson):
        return d.lam
    if isinstance(d, Bernoulli):
        return d.q
    return d.qs


def delta_to_json(d: DeltaDist) -> Dict[str, Any]:
    if isinstance(d, Poisson):
        return {"family": "poisson", "lam": d.lam}
    if isinstance(d, Bernoulli):
        return {"family": "bernoulli", "q": d.q}
    return {"family": "joint_bernoulli", "qs": list(d.qs)}


def delta_from_json(data: Dict[str, Any]) -> DeltaDist:
    family = data.get("family")
    if family == "poisson":
        return Poisson(float(data["lam"]))
    if family == "bernoulli":
        return Bernoulli(float(data["q"]))
    if family == "joint_bernoulli":
        return JointBernoulli(tuple(data["qs"]))
    raise ContractViolation(f"unknown delta family: {family!r}")


# =============================================================================
# PER-PARAMETER AND JOINT DISTRIBUTIONS
# =============================================================================

_FAMILY_FOR_KIND = {
    ParamKind.INTEGER: Poisson,
    ParamKind.ORDERED_ENUM: Poisson,
    ParamKind.BOOLEAN: Bernoulli,
    ParamKind.STRING_SET: JointBernoulli,
}


def check_delta_family(spec: ParamSpec, delta: DeltaDist):
    """Integer/OrderedEnum take Poisson, Boolean takes Bernoulli, StringSet takes a joint Bernoulli of width c"""
    expected = _FAMILY_FOR_KIND[spec.ptype.kind]
    if not isinstance(delta, expected):
        raise ContractViolation(
            f"parameter '{spec.name}' ({spec.ptype.kind.value}) needs a {expected.__name__} delta, "
            f"got {type(delta).__name__}"
        )
    if isinstance(delta, JointBernoulli) and len(delta.qs) != spec.ptype.size:
        raise ContractViolation(
            f"parameter '{spec.name}' has {spec.ptype.size} members but its delta has {len(delta.qs)} probabilities"
        )


@dataclass(frozen=True)
class ParamDistribution:
    spec: ParamSpec
    base: ParamValue
    delta: DeltaDist

    def __post_init__(self):
        if not self.spec.ptype.contains(self.base):
            raise ContractViolation(f"base {self.base!r} does not belong to parameter '{self.spec.name}'")
        check_delta_family(self.spec, self.delta)


@dataclass(frozen=True)
class JointDistribution:
    """Independent product of per-parameter distributions, aligned with a profile"""
    params: Tuple[ParamDistribution, ...]

    def __post_init__(self):
        params = tuple(self.params)
        make_profile(p.spec for p in params)
        object.__setattr__(self, "params", params)

    @classmethod
    def from_parts(cls, profile: Profile, base: Setting, deltas: Sequence[DeltaDist]) -> "JointDistribution":
        if not (len(profile) == len(base) == len(deltas)):
            raise ContractViolation(
                f"profile, base and deltas disagree in length: {len(profile)}, {len(base)}, {len(deltas)}"
            )
        return cls(tuple(
            ParamDistribution(spec, value, delta)
            for spec, value, delta in zip(profile, base, deltas)
        ))

    @property
    def profile(self) -> Profile:
        return tuple(p.spec for p in self.params)

    @property
    def base(self) -> Setting:
        return Setting(tuple(p.base for p in self.params))

    @property
    def deltas(self) -> List[DeltaDist]:
        return [p.delta for p in self.params]


# =============================================================================
# SAMPLING
# =============================================================================

def make_rng(seed: int) -> np.random.Generator:
    """Seeded random stream; same seed and call order give the same draws"""
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def spawn_rngs(seed: int, count: int) -> List[np.random.Generator]:
    """Independent substreams derived from one master seed"""
    children = np.random.SeedSequence(int(seed)).spawn(count)
    return [np.random.default_rng(child) for child in children]


DeltaDraw = Union[int, Tuple[int, ...]]


def _bernoulli_draw(q: float, rng) -> int:
    return int(rng.random() < q)


def draw_delta(delta: DeltaDist, rng) -> DeltaDraw:
    """One draw of the exploration part: a count, a bit, or a bit tuple"""
    if isinstance(delta, Poisson):
        return int(rng.poisson(delta.lam))
    if isinstance(delta, Bernoulli):
        return _bernoulli_draw(delta.q, rng)
    return tuple(_bernoulli_draw(q, rng) for q in delta.qs)


def combine(spec: ParamSpec, base: ParamValue, draw: DeltaDraw) -> ParamValue:
    """
    The (+) operator applied to a concrete delta draw

    Integers shift right by the draw, enum indices shift and clamp to the
    last label, booleans and set bits take the disjunction.
    """
    kind = spec.ptype.kind

    if kind == ParamKind.INTEGER:
        return base.shifted(draw)
    if kind == ParamKind.ORDERED_ENUM:
        return EnumValue(min(base.i + int(draw), spec.ptype.size - 1))
    if kind == ParamKind.BOOLEAN:
        return BoolValue(base.b | int(draw))
    if len(draw) != len(base.bits):
        raise ContractViolation(f"draw width {len(draw)} does not match '{spec.name}' ({len(base.bits)} members)")
    return BitsValue(tuple(bit | int(x) for bit, x in zip(base.bits, draw)))


def sample_param(d: ParamDistribution, rng) -> ParamValue:
    """Draw one value of base (+) delta; the base is always a lattice floor of the draw"""
    return combine(d.spec, d.base, draw_delta(d.delta, rng))


def sample_setting(joint: JointDistribution, num: int, rng) -> List[Setting]:
    if num < 1:
        raise ContractViolation(f"number of samples must be positive, got {num}")
    return [
        Setting(tuple(sample_param(p, rng) for p in joint.params))
        for _ in range(num)
    ]
