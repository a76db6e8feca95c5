"""
Command handlers: each returns a process exit code
"""
import json
import logging
import shlex
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from analyzers.sim_analyzer import (
    BenchKnobs,
    SimBenchmark,
    gen_benchmark,
    gen_skewed_benchmark,
    skewed_budget,
)
from cli.schema import TuneSetup, load_setup
from config import (
    CONFIG_SCHEMA_VERSION,
    EXIT_BASELINE_FAILED,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    STRATEGY_NAMES,
)
from core.codec import setting_from_json, setting_to_json
from core.errors import ConfigError, ContractViolation, RenderError, TunerError
from core.lattice import Setting
from engine.models import HyperParams, Termination
from engine.orchestrator import tune
from harness.compare import compare, write_table
from harness.strategies import OfficialStrategy, make_strategy
from services.report_service import BaselineRecord, FinalRecord, ReportService, RoundRecord

logger = logging.getLogger(__name__)

BENCH_SUFFIX = ".bench.json"
TUNE_SUFFIX = ".tune.json"


def _fail(message: str) -> int:
    logger.error(message)
    print(f"error: {message}", file=sys.stderr)
    return EXIT_CONFIG_ERROR


# =============================================================================
# TUNE / VALIDATE / RENDER
# =============================================================================

def cmd_tune(
    config_path: str,
    budget: Optional[float] = None,
    seed: Optional[int] = None,
    jobs: Optional[int] = None,
    report_path: Optional[str] = None,
    timestamps: bool = True,
) -> int:
    """Run one tuning session and print the final setting and its alarm count"""
    try:
        setup = load_setup(config_path)
        report = ReportService(report_path or setup.config.report_path, timestamps=timestamps)
        request = setup.request(budget=budget, seed=seed, jobs=jobs, report=report)
    except TunerError as e:
        return _fail(str(e))

    result = tune(request)
    if result.termination == Termination.BASELINE_FAILED:
        print(f"Baseline analysis failed: {result.baseline.reason.value} {result.baseline.detail}".rstrip())
        return EXIT_BASELINE_FAILED

    print(f"Final setting: {json.dumps(setting_to_json(setup.profile, result.final_setting), sort_keys=True)}")
    print(f"Final alarm count: {result.final_alarm_count if result.final_alarm_count is not None else 'unknown'}")
    print(f"Rounds: {len(result.rounds)} ({result.termination.value}), wall time {result.total_wall_time:.3f}s")
    try:
        argv = setup.analyzer.render(result.final_setting, setup.program)
    except RenderError as e:
        logger.warning(f"Final setting cannot be rendered: {e}")
        argv = []
    if argv:
        print(f"Command: {shlex.join(argv)}")
    return EXIT_OK


def cmd_validate(config_path: str) -> int:
    """Schema and semantic validation only; nothing is run"""
    try:
        setup = load_setup(config_path)
    except TunerError as e:
        return _fail(str(e))
    name = setup.config.name or Path(config_path).name
    print(f"OK: {name} ({len(setup.profile)} parameters, {setup.analyzer.kind.value} analyzer)")
    return EXIT_OK


def setting_from_report(setup: TuneSetup, ref: str) -> Setting:
    """
    Setting stored in a report, addressed as PATH:INDEX

    The record at INDEX (negative counts from the end) gives its final
    setting, its base after refinement, or the baseline setting.
    """
    path, sep, index_text = ref.rpartition(":")
    if not sep or not path:
        raise ConfigError(f"expected PATH:INDEX, got {ref!r}", "--from-report")
    try:
        index = int(index_text)
    except ValueError as e:
        raise ConfigError(f"record index must be an integer, got {index_text!r}", "--from-report") from e

    try:
        records = ReportService.read_records(path)
    except OSError as e:
        raise ConfigError(f"cannot read report {path}: {e}", "--from-report") from e
    except ValueError as e:
        raise ConfigError(f"invalid report {path}: {e}", "--from-report") from e
    try:
        record = records[index]
    except IndexError as e:
        raise ConfigError(f"report has {len(records)} records, no index {index}", "--from-report") from e

    if isinstance(record, FinalRecord):
        mapping = record.final_setting
    elif isinstance(record, RoundRecord):
        mapping = record.base_after
    elif isinstance(record, BaselineRecord):
        mapping = record.setting
    else:
        raise ConfigError(f"record {index} holds no setting", "--from-report")
    try:
        return setting_from_json(setup.profile, mapping)
    except ContractViolation as e:
        raise ConfigError(str(e), "--from-report") from e


def setting_from_fragment(setup: TuneSetup, fragment: str) -> Setting:
    """Inline JSON object; parameters it leaves out keep their initial base value"""
    try:
        overrides = json.loads(fragment)
    except json.JSONDecodeError as e:
        raise ConfigError(f"not valid JSON: {e}", "--setting") from e
    if not isinstance(overrides, dict):
        raise ConfigError("expected a JSON object of parameter values", "--setting")

    mapping: Dict[str, Any] = setting_to_json(setup.profile, setup.initial.base)
    unknown = sorted(set(overrides) - set(mapping))
    if unknown:
        raise ConfigError(f"unknown parameters {unknown}", "--setting")
    mapping.update(overrides)
    try:
        return setting_from_json(setup.profile, mapping)
    except ContractViolation as e:
        raise ConfigError(str(e), "--setting") from e


def cmd_render(config_path: str, setting: Optional[str] = None, from_report: Optional[str] = None) -> int:
    """Print the analyzer invocation for a setting, ready to paste into a shell"""
    try:
        setup = load_setup(config_path)
        if from_report:
            chosen = setting_from_report(setup, from_report)
        elif setting:
            chosen = setting_from_fragment(setup, setting)
        else:
            chosen = setup.initial.base
        argv = setup.analyzer.render(chosen, setup.program)
    except TunerError as e:
        return _fail(str(e))
    print(shlex.join(argv))
    return EXIT_OK


# =============================================================================
# BENCHMARKS
# =============================================================================

def generate_benchmarks(
    family: str,
    count: int,
    seed: int,
    knobs: BenchKnobs = BenchKnobs(),
) -> List[SimBenchmark]:
    """count benchmarks from consecutive generator seeds"""
    if family == "skewed":
        return [gen_skewed_benchmark(seed + i, knobs.cost_scale) for i in range(count)]
    return [gen_benchmark(seed + i, knobs) for i in range(count)]


def tune_config_for(bench: SimBenchmark, bench_file: str, budget: float) -> Dict[str, Any]:
    """A simulator tuning config that replays a benchmark file"""
    return {
        "schema_version": CONFIG_SCHEMA_VERSION,
        "name": bench.id,
        "analyzer": {"kind": "simulated", "benchmark": bench_file},
        "budget_seconds": budget,
        "seed": 0,
    }


def load_benchmarks(models_dir: str) -> List[SimBenchmark]:
    paths = sorted(Path(models_dir).glob(f"*{BENCH_SUFFIX}"))
    if not paths:
        raise ConfigError(f"no *{BENCH_SUFFIX} files in {models_dir}", "--models")
    benchmarks = []
    for path in paths:
        try:
            benchmarks.append(SimBenchmark.from_dict(json.loads(path.read_text(encoding="utf-8"))))
        except (OSError, ValueError, KeyError, TypeError) as e:
            raise ConfigError(f"invalid benchmark {path}: {e}", "--models") from e
    return benchmarks


def load_ladders(path: str):
    """Official settings: a list of setting objects, or benchmark id -> list"""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise ConfigError(f"cannot read ladder file {path}: {e}", "--ladder") from e
    lists = data.values() if isinstance(data, dict) else [data]
    if not all(isinstance(items, list) and all(isinstance(i, dict) for i in items) for items in lists):
        raise ConfigError("ladder file must hold a list of setting objects or an object of such lists", "--ladder")
    return data


def cmd_generate(
    out_dir: str,
    family: str = "uniform",
    count: int = 1,
    seed: int = 0,
    knobs: BenchKnobs = BenchKnobs(),
    budget: Optional[float] = None,
) -> int:
    """Write benchmarks plus a replay config for each"""
    if count < 1:
        return _fail(f"count must be positive, got {count}")
    try:
        benchmarks = generate_benchmarks(family, count, seed, knobs)
    except ContractViolation as e:
        return _fail(str(e))

    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for bench in benchmarks:
            bench_file = f"{bench.id}{BENCH_SUFFIX}"
            (out / bench_file).write_text(json.dumps(bench.to_dict(), indent=2, sort_keys=True) + "\n")
            config = tune_config_for(bench, bench_file, budget or skewed_budget(knobs.cost_scale))
            (out / f"{bench.id}{TUNE_SUFFIX}").write_text(json.dumps(config, indent=2, sort_keys=True) + "\n")
    except OSError as e:
        return _fail(f"cannot write benchmarks to {out}: {e}")

    print(f"Wrote {len(benchmarks)} {family} benchmark(s) to {out}")
    return EXIT_OK


def cmd_bench(
    models_dir: Optional[str] = None,
    generate: int = 0,
    family: str = "skewed",
    budget: Optional[float] = None,
    seeds: Sequence[int] = (0,),
    out: Optional[str] = None,
    strategies: Sequence[str] = tuple(STRATEGY_NAMES),
    hyper: Optional[HyperParams] = None,
    repeats: int = 1,
    split_budget: bool = False,
    jobs: int = 1,
    ladder: Optional[str] = None,
) -> int:
    """Compare strategies on simulator benchmarks and print the best / tied-best summary

    With a ladder file the official strategy joins the comparison.
    """
    try:
        if models_dir:
            benchmarks = load_benchmarks(models_dir)
        elif generate > 0:
            benchmarks = generate_benchmarks(family, generate, 0)
        else:
            raise ConfigError("give --models DIR or --generate N", "--models")
        if budget is not None and not budget > 0:
            raise ConfigError(f"budget must be positive, got {budget}", "--budget")
        chosen = [make_strategy(name, hyper, repeats, split_budget) for name in strategies]
        if ladder:
            chosen.append(OfficialStrategy(load_ladders(ladder)))
        table = compare(benchmarks, chosen, budget or skewed_budget(), list(seeds), jobs=jobs)
        if out:
            write_table(table, Path(out))
    except TunerError as e:
        return _fail(str(e))
    except OSError as e:
        return _fail(f"cannot write {out}: {e}")

    print(f"{'strategy':<10} {'best':>5} {'tied':>5} {'overall':>8}")
    for name, counts in table.summary().items():
        print(f"{name:<10} {counts['best']:>5} {counts['tied']:>5} {counts['overall']:>8}")
    if out:
        print(f"Table written to {out}")
    return EXIT_OK
