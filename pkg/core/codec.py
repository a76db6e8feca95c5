"""
JSON forms of parameter values and settings

Canonical forms:
- integer:      int, or the string "inf"
- boolean:      true / false
- ordered_enum: the label string
- string_set:   list of selected member names, in member order
"""
from typing import Any, Dict, List, Mapping, Sequence

from core.distributions import JointDistribution, ParamDistribution, delta_from_json, delta_to_json
from core.errors import ContractViolation
from core.lattice import (
    INFINITY,
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
    check_setting,
    make_profile,
)

_INFINITY_SPELLINGS = {"inf", "infinity", "∞"}


def value_to_json(ptype: ParamType, value: ParamValue) -> Any:
    if not ptype.contains(value):
        raise ContractViolation(f"value {value!r} is not a {ptype.kind.value}")

    if ptype.kind == ParamKind.INTEGER:
        return "inf" if value.is_infinite else value.v
    if ptype.kind == ParamKind.BOOLEAN:
        return bool(value.b)
    if ptype.kind == ParamKind.ORDERED_ENUM:
        return ptype.labels[value.i]
    return [member for member, bit in zip(ptype.labels, value.bits) if bit]


def value_from_json(ptype: ParamType, raw: Any) -> ParamValue:
    """Parse a JSON value; also accepts indices, 0/1 and bit strings"""
    kind = ptype.kind

    if kind == ParamKind.INTEGER:
        if isinstance(raw, str) and raw.strip().lower() in _INFINITY_SPELLINGS:
            return IntValue(INFINITY)
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise ContractViolation(f"expected a non-negative integer or 'inf', got {raw!r}")
        return IntValue(raw)

    if kind == ParamKind.BOOLEAN:
        if raw in (0, 1) or isinstance(raw, bool):
            return BoolValue(int(raw))
        raise ContractViolation(f"expected a boolean, got {raw!r}")

    if kind == ParamKind.ORDERED_ENUM:
        if isinstance(raw, str):
            if raw not in ptype.labels:
                raise ContractViolation(f"unknown label {raw!r}; expected one of {list(ptype.labels)}")
            return EnumValue(ptype.labels.index(raw))
        if isinstance(raw, int) and not isinstance(raw, bool) and 0 <= raw < ptype.size:
            return EnumValue(raw)
        raise ContractViolation(f"expected an enum label or index, got {raw!r}")

    if isinstance(raw, str):
        if len(raw) != ptype.size or set(raw) - {"0", "1"}:
            raise ContractViolation(f"expected a {ptype.size}-bit string, got {raw!r}")
        return BitsValue.from_string(raw)
    if isinstance(raw, (list, tuple)):
        unknown = [m for m in raw if m not in ptype.labels]
        if unknown:
            raise ContractViolation(f"unknown set members {unknown}; expected a subset of {list(ptype.labels)}")
        selected = set(raw)
        return BitsValue(tuple(1 if m in selected else 0 for m in ptype.labels))
    raise ContractViolation(f"expected a list of members, got {raw!r}")


def setting_to_json(profile: Profile, setting: Setting) -> Dict[str, Any]:
    check_setting(profile, setting)
    return {spec.name: value_to_json(spec.ptype, value) for spec, value in zip(profile, setting)}


def setting_from_json(profile: Profile, mapping: Mapping[str, Any]) -> Setting:
    """Build a setting from a name -> value mapping covering every parameter"""
    names = {spec.name for spec in profile}
    unknown = sorted(set(mapping) - names)
    if unknown:
        raise ContractViolation(f"unknown parameters: {unknown}")
    missing = [spec.name for spec in profile if spec.name not in mapping]
    if missing:
        raise ContractViolation(f"missing parameters: {missing}")

    values = []
    for spec in profile:
        try:
            values.append(value_from_json(spec.ptype, mapping[spec.name]))
        except ContractViolation as e:
            raise ContractViolation(f"parameter '{spec.name}': {e}") from e
    setting = Setting(tuple(values))
    check_setting(profile, setting)
    return setting


# =============================================================================
# PARAMETER SPECS AND DISTRIBUTIONS
# =============================================================================

def spec_to_json(spec: ParamSpec) -> Dict[str, Any]:
    data = {"name": spec.name, "type": spec.ptype.kind.value}
    if spec.ptype.kind == ParamKind.ORDERED_ENUM:
        data["labels"] = list(spec.ptype.labels)
    elif spec.ptype.kind == ParamKind.STRING_SET:
        data["members"] = list(spec.ptype.labels)
    return data


def spec_from_json(data: Mapping[str, Any]) -> ParamSpec:
    try:
        kind = ParamKind(data.get("type"))
    except ValueError:
        raise ContractViolation(
            f"unknown parameter type {data.get('type')!r}; expected one of {[k.value for k in ParamKind]}"
        )
    labels = data.get("labels") if kind == ParamKind.ORDERED_ENUM else data.get("members")
    return ParamSpec(data.get("name", ""), ParamType(kind, tuple(labels or ())))


def profile_to_json(profile: Profile) -> List[Dict[str, Any]]:
    return [spec_to_json(spec) for spec in profile]


def profile_from_json(items: Sequence[Mapping[str, Any]]) -> Profile:
    return make_profile(spec_from_json(item) for item in items)


def distribution_to_json(joint: JointDistribution) -> Dict[str, Any]:
    """name -> {"base": value, "delta": {...}}"""
    return {
        p.spec.name: {"base": value_to_json(p.spec.ptype, p.base), "delta": delta_to_json(p.delta)}
        for p in joint.params
    }


def distribution_from_json(profile: Profile, mapping: Mapping[str, Any]) -> JointDistribution:
    names = {spec.name for spec in profile}
    unknown = sorted(set(mapping) - names)
    if unknown:
        raise ContractViolation(f"distribution entries for unknown parameters: {unknown}")

    params = []
    for spec in profile:
        if spec.name not in mapping:
            raise ContractViolation(f"parameter '{spec.name}' has no initial distribution entry")
        entry = mapping[spec.name]
        try:
            base = value_from_json(spec.ptype, entry["base"])
            delta = delta_from_json(entry["delta"])
            params.append(ParamDistribution(spec, base, delta))
        except KeyError as e:
            raise ContractViolation(f"parameter '{spec.name}': missing {e.args[0]!r}") from e
        except ContractViolation as e:
            raise ContractViolation(f"parameter '{spec.name}': {e}") from e
    return JointDistribution(tuple(params))
