"""
Analyzer profiles: how a setting becomes a command line and how output becomes alarms
"""
import re
from string import Formatter
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from config import DEFAULT_ACCEPTED_EXIT_CODES, DEFAULT_TIMEOUT_GRACE_SECONDS
from core.errors import ConfigError
from core.lattice import ParamKind, Profile

# Placeholders usable in command templates
TEMPLATE_PLACEHOLDERS = {"sources", "params", "program", "workdir"}

RenderStyle = Literal["int", "label", "joined", "presence", "bool_literal"]

_STYLE_KINDS = {
    "int": {ParamKind.INTEGER, ParamKind.ORDERED_ENUM},
    "label": {ParamKind.ORDERED_ENUM},
    "joined": {ParamKind.STRING_SET},
    "presence": {ParamKind.BOOLEAN},
    "bool_literal": {ParamKind.BOOLEAN},
}


def template_fields(arg: str) -> List[str]:
    """Placeholder names appearing in one template argument"""
    return [name for _, name, _, _ in Formatter().parse(arg) if name is not None]


class RenderRule(BaseModel):
    """How one parameter appears on the command line"""
    flag: str = Field(..., min_length=1, description="Option name, e.g. -eva-slevel")
    style: RenderStyle = Field(..., description="int, label, joined, presence or bool_literal")
    separator: str = Field(",", description="Separator between selected set members")
    joiner: Optional[str] = Field(None, description="Emit flag and value as one argument joined by this, e.g. '='")
    negative_flag: Optional[str] = Field(None, description="Flag emitted when a presence boolean is off")
    omit_if_empty: bool = Field(True, description="Drop the flag entirely for an empty set")
    true_literal: str = "true"
    false_literal: str = "false"


class ExtractionRule(BaseModel):
    """How alarms are read from analyzer output"""
    mode: Literal["regex_lines", "json_pointer"] = "regex_lines"
    pattern: Optional[str] = Field(None, description="Per-line regex; group 1 is the alarm text")
    pointer: Optional[str] = Field(None, description="JSON pointer to an array of alarm strings")
    strip: bool = True
    collapse_spaces: bool = True
    drop_line_numbers: bool = True

    @model_validator(mode="after")
    def check_mode(self) -> "ExtractionRule":
        if self.mode == "regex_lines":
            if not self.pattern:
                raise ValueError("regex_lines extraction needs a pattern")
            try:
                compiled = re.compile(self.pattern)
            except re.error as e:
                raise ValueError(f"invalid alarm pattern {self.pattern!r}: {e}")
            if compiled.groups < 1:
                raise ValueError("alarm pattern needs one capture group")
        elif self.pointer is None:
            raise ValueError("json_pointer extraction needs a pointer")
        elif self.pointer and not self.pointer.startswith("/"):
            raise ValueError(f"JSON pointer must start with '/', got {self.pointer!r}")
        return self


class AnalyzerProfile(BaseModel):
    """Everything needed to drive one external analyzer as a black box"""
    command_template: List[str] = Field(..., min_length=1, description="argv with {sources} {params} {program} {workdir}")
    param_renderings: Dict[str, RenderRule] = Field(..., description="Rendering rule per parameter name")
    workdir: Optional[str] = Field(None, description="Working directory; a fresh temp dir when unset")
    env: Dict[str, str] = Field(default_factory=dict, description="Extra environment variables")
    alarm_extraction: ExtractionRule
    timeout_grace_seconds: float = Field(DEFAULT_TIMEOUT_GRACE_SECONDS, ge=0)
    accepted_exit_codes: List[int] = Field(default_factory=lambda: list(DEFAULT_ACCEPTED_EXIT_CODES))

    @field_validator("command_template")
    @classmethod
    def check_placeholders(cls, template: List[str]) -> List[str]:
        for arg in template:
            try:
                names = template_fields(arg)
            except ValueError as e:
                raise ValueError(f"malformed template argument {arg!r}: {e}")
            unknown = [n for n in names if n not in TEMPLATE_PLACEHOLDERS]
            if unknown:
                raise ValueError(f"unknown placeholder(s) {unknown} in {arg!r}")
            if "params" in names and arg != "{params}":
                raise ValueError("{params} must be a whole template argument")
        return template

    def check_against(self, profile: Profile):
        """Every parameter has exactly one rule and each rule fits its parameter type"""
        names = {spec.name for spec in profile}
        for spec in profile:
            rule = self.param_renderings.get(spec.name)
            if rule is None:
                raise ConfigError(f"no rendering rule for parameter '{spec.name}'", "analyzer.param_renderings")
            if spec.ptype.kind not in _STYLE_KINDS[rule.style]:
                raise ConfigError(
                    f"style '{rule.style}' cannot render {spec.ptype.kind.value} parameter '{spec.name}'",
                    f"analyzer.param_renderings.{spec.name}",
                )
        extra = sorted(set(self.param_renderings) - names)
        if extra:
            raise ConfigError(f"rendering rules for unknown parameters {extra}", "analyzer.param_renderings")
