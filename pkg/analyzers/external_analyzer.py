"""
External analyzer adapter
Renders settings into command lines, runs the analyzer, and reads its alarms
"""
import tempfile
from contextlib import contextmanager
from typing import Iterator, List, Optional

import config
from analyzers.alarms import AlarmExtractor
from analyzers.base_analyzer import AnalyzerKind, AnalyzerRegistry, BaseAnalyzer, ProgramRef
from analyzers.profile import AnalyzerProfile, RenderRule, template_fields
from core.errors import ExtractionError, RenderError
from core.lattice import ParamKind, ParamSpec, ParamValue, Profile, Setting, check_setting
from core.outcome import AnalysisOutcome, FailureReason
from services.process_service import ProcessService


def _with_flag(rule: RenderRule, value: str) -> List[str]:
    if rule.joiner is not None:
        return [f"{rule.flag}{rule.joiner}{value}"]
    return [rule.flag, value]


def render_param(spec: ParamSpec, rule: RenderRule, value: ParamValue) -> List[str]:
    """Arguments for one parameter value under its rendering rule"""
    kind = spec.ptype.kind

    if kind == ParamKind.INTEGER:
        if value.is_infinite:
            raise RenderError(f"parameter '{spec.name}' is infinite and has no command-line form")
        return _with_flag(rule, str(value.v))

    if kind == ParamKind.ORDERED_ENUM:
        text = spec.ptype.labels[value.i] if rule.style == "label" else str(value.i)
        return _with_flag(rule, text)

    if kind == ParamKind.BOOLEAN:
        if rule.style == "bool_literal":
            return _with_flag(rule, rule.true_literal if value.b else rule.false_literal)
        if value.b:
            return [rule.flag]
        return [rule.negative_flag] if rule.negative_flag else []

    members = [m for m, bit in zip(spec.ptype.labels, value.bits) if bit]
    if not members and rule.omit_if_empty:
        return []
    return _with_flag(rule, rule.separator.join(members))


def render_params(analyzer_profile: AnalyzerProfile, profile: Profile, setting: Setting) -> List[str]:
    check_setting(profile, setting)
    args = []
    for spec, value in zip(profile, setting):
        rule = analyzer_profile.param_renderings.get(spec.name)
        if rule is None:
            raise RenderError(f"no rendering rule for parameter '{spec.name}'")
        args.extend(render_param(spec, rule, value))
    return args


def render_command(
    analyzer_profile: AnalyzerProfile,
    profile: Profile,
    prog: ProgramRef,
    setting: Setting,
    workdir: str = "",
) -> List[str]:
    """
    Substitute program and parameters into the command template

    "{sources}" and "{params}" as whole arguments splice in zero or more
    arguments; inside a larger argument {sources} joins the paths with spaces.

    Raises:
        RenderError: Infinity in the setting, or an unknown placeholder
    """
    if setting.has_infinity():
        raise RenderError(f"setting {setting} contains infinity")

    params = render_params(analyzer_profile, profile, setting)
    values = {
        "sources": " ".join(prog.source_paths),
        "program": prog.identifier,
        "workdir": workdir or analyzer_profile.workdir or "",
    }

    argv = []
    for arg in analyzer_profile.command_template:
        if arg == "{params}":
            argv.extend(params)
        elif arg == "{sources}":
            argv.extend(prog.source_paths)
        else:
            unknown = [n for n in template_fields(arg) if n not in values]
            if unknown:
                raise RenderError(f"unknown placeholder(s) {unknown} in template argument {arg!r}")
            argv.append(arg.format(**values))
    return argv


@AnalyzerRegistry.register(AnalyzerKind.EXTERNAL)
class ExternalAnalyzer(BaseAnalyzer):
    """
    A real analyzer run as a subprocess

    Each call gets its own working directory (unless the profile pins one)
    and its own process group, so concurrent calls share nothing.
    """

    def __init__(self, profile: Profile, analyzer_profile: AnalyzerProfile):
        super().__init__(AnalyzerKind.EXTERNAL, profile)
        analyzer_profile.check_against(profile)
        self.analyzer_profile = analyzer_profile

    @contextmanager
    def _workdir(self) -> Iterator[str]:
        if self.analyzer_profile.workdir:
            yield self.analyzer_profile.workdir
            return
        with tempfile.TemporaryDirectory(prefix="tuner-", dir=config.TEMP_DIR) as path:
            yield path

    def render(self, setting: Setting, prog: Optional[ProgramRef] = None) -> List[str]:
        prog = prog or ProgramRef("program")
        return render_command(self.analyzer_profile, self.profile, prog, setting)

    def analyze(self, prog: ProgramRef, setting: Setting, deadline: float) -> AnalysisOutcome:
        if not deadline > 0:
            return AnalysisOutcome.failed(setting, FailureReason.TIMEOUT, detail="no time left")

        with self._workdir() as workdir:
            try:
                argv = render_command(self.analyzer_profile, self.profile, prog, setting, workdir)
            except RenderError as e:
                self.logger.error(f"Cannot render {setting}: {e}")
                return AnalysisOutcome.failed(setting, FailureReason.CRASH, detail=str(e))

            self.logger.debug(f"Running: {' '.join(argv)}")
            result = ProcessService.run(
                argv,
                timeout=deadline,
                grace=self.analyzer_profile.timeout_grace_seconds,
                cwd=workdir,
                env=self.analyzer_profile.env,
            )

        if not result.launched:
            return AnalysisOutcome.failed(setting, FailureReason.CRASH, result.wall_time, result.error)
        if result.timed_out:
            self.logger.warning(f"Analysis of {prog.identifier} under {setting} timed out after {deadline:.2f}s")
            return AnalysisOutcome.failed(setting, FailureReason.TIMEOUT, result.wall_time)
        if result.returncode not in self.analyzer_profile.accepted_exit_codes:
            tail = result.stderr.strip().splitlines()[-1:] if result.stderr.strip() else []
            detail = f"exit code {result.returncode}" + (f": {tail[0]}" if tail else "")
            self.logger.error(f"Analyzer crashed under {setting}: {detail}")
            return AnalysisOutcome.failed(setting, FailureReason.CRASH, result.wall_time, detail)

        try:
            rule = self.analyzer_profile.alarm_extraction
            # JSON reports come on stdout only
            output = result.stdout if rule.mode == "json_pointer" else result.output
            alarms = AlarmExtractor.extract(output, rule)
        except ExtractionError as e:
            self.logger.error(f"Cannot read alarms under {setting}: {e}")
            return AnalysisOutcome.failed(setting, FailureReason.PARSE_ERROR, result.wall_time, str(e))

        self.log_action(
            f"Analyzed {prog.identifier}: {len(alarms)} alarm(s) in {result.wall_time:.2f}s",
            {"argv": argv, "returncode": result.returncode},
        )
        return AnalysisOutcome.completed(setting, alarms, result.wall_time)
