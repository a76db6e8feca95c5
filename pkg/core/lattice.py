"""
Latticed parameter spaces

Each analyzer parameter lives in a complete lattice:
- Integer:      N extended with a symbolic top element INFINITY, ordered by <=
- Boolean:      {0, 1} ordered by implication
- OrderedEnum:  the chain 0 < 1 < ... < k-1 over label indices
- StringSet:    bitvectors over a fixed member list, ordered by subset

A Setting is a point of the product lattice of a profile (ordered ParamSpecs);
its order, meet and join are the coordinate-wise liftings.
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Iterable, Iterator, Sequence, Tuple, Union

from config import MAX_PARAM_INT
from core.errors import ContractViolation


class ParamKind(Enum):
    """Types of analyzer parameters"""
    INTEGER = "integer"
    BOOLEAN = "boolean"
    ORDERED_ENUM = "ordered_enum"
    STRING_SET = "string_set"


class _Infinity:
    """Top element of the integer lattice. Never rendered to an analyzer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


# =============================================================================
# PARAMETER VALUES
# =============================================================================

@dataclass(frozen=True)
class IntValue:
    v: Union[int, _Infinity]

    def __post_init__(self):
        if self.v is INFINITY:
            return
        if isinstance(self.v, bool) or not isinstance(self.v, int):
            raise ContractViolation(f"integer parameter value must be int, got {self.v!r}")
        if not 0 <= self.v <= MAX_PARAM_INT:
            raise ContractViolation(f"integer parameter value out of range: {self.v}")

    @property
    def is_infinite(self) -> bool:
        return self.v is INFINITY

    def shifted(self, k: int) -> "IntValue":
        """Saturating rightward shift by a non-negative amount"""
        if self.is_infinite:
            return self
        return IntValue(min(self.v + int(k), MAX_PARAM_INT))

    def __str__(self) -> str:
        return "inf" if self.is_infinite else str(self.v)


@dataclass(frozen=True)
class BoolValue:
    b: int

    def __post_init__(self):
        if self.b not in (0, 1):
            raise ContractViolation(f"boolean parameter value must be 0 or 1, got {self.b!r}")
        # True/False normalize to ints so equality is structural
        object.__setattr__(self, "b", int(self.b))

    def __str__(self) -> str:
        return str(self.b)


@dataclass(frozen=True)
class EnumValue:
    i: int

    def __post_init__(self):
        if isinstance(self.i, bool) or not isinstance(self.i, int) or self.i < 0:
            raise ContractViolation(f"enum index must be a non-negative int, got {self.i!r}")

    def __str__(self) -> str:
        return str(self.i)


@dataclass(frozen=True)
class BitsValue:
    bits: Tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(x) for x in self.bits)
        if not bits or any(x not in (0, 1) for x in bits):
            raise ContractViolation(f"bitvector must be a non-empty 0/1 sequence, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, text: str) -> "BitsValue":
        return cls(tuple(int(ch) for ch in text))

    def popcount(self) -> int:
        return sum(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(str(x) for x in self.bits)


ParamValue = Union[IntValue, BoolValue, EnumValue, BitsValue]


def _check_comparable(a: ParamValue, b: ParamValue):
    if type(a) is not type(b):
        raise ContractViolation(
            f"cannot compare {type(a).__name__} with {type(b).__name__}"
        )
    if isinstance(a, BitsValue) and len(a.bits) != len(b.bits):
        raise ContractViolation(
            f"bitvector widths differ: {len(a.bits)} vs {len(b.bits)}"
        )


# =============================================================================
# ORDER, MEET, JOIN
# =============================================================================

def leq(a: ParamValue, b: ParamValue) -> bool:
    """Return whether a is below b in its parameter lattice"""
    _check_comparable(a, b)

    if isinstance(a, IntValue):
        if b.is_infinite:
            return True
        if a.is_infinite:
            return False
        return a.v <= b.v
    if isinstance(a, BoolValue):
        return a.b <= b.b
    if isinstance(a, EnumValue):
        return a.i <= b.i
    return all(x <= y for x, y in zip(a.bits, b.bits))


def meet(a: ParamValue, b: ParamValue) -> ParamValue:
    """Greatest lower bound"""
    _check_comparable(a, b)

    if isinstance(a, IntValue):
        return a if leq(a, b) else b
    if isinstance(a, BoolValue):
        return BoolValue(a.b & b.b)
    if isinstance(a, EnumValue):
        return EnumValue(min(a.i, b.i))
    return BitsValue(tuple(x & y for x, y in zip(a.bits, b.bits)))


def join(a: ParamValue, b: ParamValue) -> ParamValue:
    """Least upper bound"""
    _check_comparable(a, b)

    if isinstance(a, IntValue):
        return b if leq(a, b) else a
    if isinstance(a, BoolValue):
        return BoolValue(a.b | b.b)
    if isinstance(a, EnumValue):
        return EnumValue(max(a.i, b.i))
    return BitsValue(tuple(x | y for x, y in zip(a.bits, b.bits)))


# =============================================================================
# PARAMETER TYPES AND SPECS
# =============================================================================

@dataclass(frozen=True)
class ParamType:
    """
    A parameter space

    labels holds the ordered enum labels (precision order) or the string-set
    members (bit i refers to labels[i]); it is empty for integers and booleans.
    """
    kind: ParamKind
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)

        if len(set(labels)) != len(labels):
            raise ContractViolation(f"duplicate labels in {self.kind.value} type: {labels}")
        if self.kind == ParamKind.ORDERED_ENUM and len(labels) < 2:
            raise ContractViolation("ordered enum needs at least 2 labels")
        if self.kind == ParamKind.STRING_SET and len(labels) < 1:
            raise ContractViolation("string set needs at least 1 member")
        if self.kind in (ParamKind.INTEGER, ParamKind.BOOLEAN) and labels:
            raise ContractViolation(f"{self.kind.value} type takes no labels")

    @classmethod
    def integer(cls) -> "ParamType":
        return cls(ParamKind.INTEGER)

    @classmethod
    def boolean(cls) -> "ParamType":
        return cls(ParamKind.BOOLEAN)

    @classmethod
    def ordered_enum(cls, labels: Sequence[str]) -> "ParamType":
        return cls(ParamKind.ORDERED_ENUM, tuple(labels))

    @classmethod
    def string_set(cls, members: Sequence[str]) -> "ParamType":
        return cls(ParamKind.STRING_SET, tuple(members))

    @property
    def size(self) -> int:
        """k for enums, c for string sets, 0 otherwise"""
        return len(self.labels)

    def bottom(self) -> ParamValue:
        if self.kind == ParamKind.INTEGER:
            return IntValue(0)
        if self.kind == ParamKind.BOOLEAN:
            return BoolValue(0)
        if self.kind == ParamKind.ORDERED_ENUM:
            return EnumValue(0)
        return BitsValue((0,) * self.size)

    def top(self) -> ParamValue:
        # The full bitvector is top for string sets
        if self.kind == ParamKind.INTEGER:
            return IntValue(INFINITY)
        if self.kind == ParamKind.BOOLEAN:
            return BoolValue(1)
        if self.kind == ParamKind.ORDERED_ENUM:
            return EnumValue(self.size - 1)
        return BitsValue((1,) * self.size)

    def contains(self, value: ParamValue) -> bool:
        if self.kind == ParamKind.INTEGER:
            return isinstance(value, IntValue)
        if self.kind == ParamKind.BOOLEAN:
            return isinstance(value, BoolValue)
        if self.kind == ParamKind.ORDERED_ENUM:
            return isinstance(value, EnumValue) and value.i < self.size
        return isinstance(value, BitsValue) and len(value.bits) == self.size


@dataclass(frozen=True)
class ParamSpec:
    """A named parameter; its rendering rule is looked up by name in the analyzer profile"""
    name: str
    ptype: ParamType

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise ContractViolation("parameter name must be a non-empty string")


Profile = Tuple[ParamSpec, ...]


def make_profile(specs: Iterable[ParamSpec]) -> Profile:
    """Freeze a list of specs into a profile, rejecting duplicate names"""
    profile = tuple(specs)
    names = [spec.name for spec in profile]
    duplicates = sorted({name for name in names if names.count(name) > 1})
    if duplicates:
        raise ContractViolation(f"duplicate parameter names in profile: {duplicates}")
    return profile


# =============================================================================
# SETTINGS (PRODUCT LATTICE)
# =============================================================================

@dataclass(frozen=True)
class Setting:
    """A joint parameter assignment, positionally aligned with a profile"""
    values: Tuple[ParamValue, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    @classmethod
    def of(cls, *values: ParamValue) -> "Setting":
        return cls(tuple(values))

    @classmethod
    def ints(cls, *numbers: int) -> "Setting":
        """Shorthand for all-integer settings"""
        return cls(tuple(IntValue(n) for n in numbers))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[ParamValue]:
        return iter(self.values)

    def __getitem__(self, index: int) -> ParamValue:
        return self.values[index]

    def replace(self, index: int, value: ParamValue) -> "Setting":
        values = list(self.values)
        values[index] = value
        return Setting(tuple(values))

    def has_infinity(self) -> bool:
        return any(isinstance(v, IntValue) and v.is_infinite for v in self.values)

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.values) + ")"


def check_setting(profile: Profile, setting: Setting):
    """Raise ContractViolation unless setting is a point of the profile's lattice"""
    if len(setting) != len(profile):
        raise ContractViolation(
            f"setting has {len(setting)} values but profile has {len(profile)} parameters"
        )
    for spec, value in zip(profile, setting):
        if not spec.ptype.contains(value):
            raise ContractViolation(
                f"value {value!r} does not belong to parameter '{spec.name}' ({spec.ptype.kind.value})"
            )


def _check_same_profile(p: Setting, q: Setting):
    if len(p) != len(q):
        raise ContractViolation(f"settings of different profiles: {len(p)} vs {len(q)} values")


def setting_leq(p: Setting, q: Setting) -> bool:
    _check_same_profile(p, q)
    return all(leq(a, b) for a, b in zip(p, q))


def setting_meet(p: Setting, q: Setting) -> Setting:
    _check_same_profile(p, q)
    return Setting(tuple(meet(a, b) for a, b in zip(p, q)))


def setting_join(p: Setting, q: Setting) -> Setting:
    _check_same_profile(p, q)
    return Setting(tuple(join(a, b) for a, b in zip(p, q)))


def meet_all(settings: Iterable[Setting]) -> Setting:
    """Meet of a non-empty collection"""
    settings = list(settings)
    if not settings:
        raise ContractViolation("meet of an empty collection is top; pass a start value instead")
    return reduce(setting_meet, settings)


def join_all(settings: Iterable[Setting], start: Setting) -> Setting:
    return reduce(setting_join, settings, start)


def bottom_setting(profile: Profile) -> Setting:
    return Setting(tuple(spec.ptype.bottom() for spec in profile))


def top_setting(profile: Profile) -> Setting:
    return Setting(tuple(spec.ptype.top() for spec in profile))
