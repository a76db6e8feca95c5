"""
Command-line surface: validate, tune, render, generate and bench
"""
import copy
import json

import pytest

from cli import canonical_config, load_config, parse_config
from config import PRESETS_DIR
from core.errors import ConfigError
from main import run
from services.report_service import FinalRecord, ReportService

PRESETS = sorted(PRESETS_DIR.glob("*.json"))

STUB_ANALYZER = """s=0; u=0
for a in "$@"; do
  case $a in
    --slevel=*) s=${a#--slevel=} ;;
    --loop-unroll=*) u=${a#--loop-unroll=} ;;
  esac
done
[ "$s" -ge 12 ] && [ "$u" -ge 14 ] || echo "ALARM a1: main.c:3 overflow"
[ "$s" -ge 18 ] && [ "$u" -ge 9 ] || echo "ALARM a2: main.c:8 invalid read"
[ "$s" -ge 12 ] && [ "$u" -ge 9 ] || echo "ALARM a3: main.c:11 division by zero"
"""


def write_config(directory, data, name="tune.json"):
    path = directory / name
    path.write_text(json.dumps(data))
    return str(path)


def preset(name):
    return json.loads((PRESETS_DIR / name).read_text())


def sim_config(**overrides):
    data = {
        "schema_version": 1,
        "name": "sim",
        "analyzer": {"kind": "simulated", "generate": {"seed": 3, "n_params": 2, "n_alarms": 8}},
        "budget_seconds": 500,
        "seed": 1,
    }
    data.update(overrides)
    return data


def external_config(command):
    return {
        "schema_version": 1,
        "name": "stub",
        "analyzer": {
            "kind": "external",
            "command_template": command,
            "param_renderings": {
                "slevel": {"flag": "--slevel", "style": "int", "joiner": "="},
                "loop-unroll": {"flag": "--loop-unroll", "style": "int", "joiner": "="},
            },
            "alarm_extraction": {"mode": "regex_lines", "pattern": "^ALARM (.*)$"},
        },
        "program": {"identifier": "main", "source_paths": []},
        "profile": [{"name": "slevel", "type": "integer"}, {"name": "loop-unroll", "type": "integer"}],
        "initial_distribution": {
            "slevel": {"base": 4, "delta": {"family": "poisson", "lam": 30}},
            "loop-unroll": {"base": 4, "delta": {"family": "poisson", "lam": 30}},
        },
        "hyper": {"num_refine": 2, "num_sample": 4, "jobs": 4},
        "budget_seconds": 30,
        "seed": 0,
    }


# =============================================================================
# VALIDATE
# =============================================================================

@pytest.mark.parametrize("path", PRESETS, ids=[p.stem for p in PRESETS])
def test_presets_validate(path, capsys):
    assert run(["--quiet", "validate", "--config", str(path)]) == 0
    assert capsys.readouterr().out.startswith("OK: ")


def test_framac_preset_summary(capsys):
    run(["--quiet", "validate", "--config", str(PRESETS_DIR / "framac_eva.json")])
    assert capsys.readouterr().out.strip() == "OK: framac-eva (13 parameters, external analyzer)"


@pytest.mark.parametrize("path", PRESETS, ids=[p.stem for p in PRESETS])
def test_config_round_trip(path):
    canonical = canonical_config(load_config(path))
    assert canonical_config(parse_config(json.loads(json.dumps(canonical)))) == canonical


def mutated_framac(mutate):
    data = copy.deepcopy(preset("framac_eva.json"))
    mutate(data)
    return data


def _poisson_boolean(data):
    data["initial_distribution"]["octagon-through-calls"]["delta"] = {"family": "poisson", "lam": 1.0}


def _short_qs(data):
    data["initial_distribution"]["domains"]["delta"]["qs"] = [0.5] * 4


def _missing_entry(data):
    del data["initial_distribution"]["slevel"]


def _missing_rendering(data):
    del data["analyzer"]["param_renderings"]["plevel"]


def _infinite_base(data):
    data["initial_distribution"]["slevel"]["base"] = "inf"


def _unknown_field(data):
    data["budget"] = 10


def _bad_schema_version(data):
    data["schema_version"] = 7


@pytest.mark.parametrize("mutate, mentioned", [
    (_poisson_boolean, "octagon-through-calls"),
    (_short_qs, "domains"),
    (_missing_entry, "slevel"),
    (_missing_rendering, "plevel"),
    (_infinite_base, "infinity"),
    (_unknown_field, "budget"),
    (_bad_schema_version, "schema_version"),
])
def test_invalid_configs_are_rejected(mutate, mentioned, tmp_path, capsys):
    path = write_config(tmp_path, mutated_framac(mutate))
    assert run(["--quiet", "validate", "--config", path]) == 1
    err = capsys.readouterr().err
    assert "error: " in err
    assert mentioned in err


def test_error_names_the_field():
    data = sim_config(budget_seconds=-5)
    with pytest.raises(ConfigError) as info:
        parse_config(data)
    assert info.value.field == "budget_seconds"


def test_unreadable_config(tmp_path, capsys):
    assert run(["--quiet", "validate", "--config", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["--quiet", "validate", "--config", str(bad)]) == 1
    assert "<file>" in capsys.readouterr().err


def test_external_config_needs_profile(tmp_path):
    data = external_config(["analyzer", "{params}"])
    del data["profile"]
    assert run(["--quiet", "validate", "--config", write_config(tmp_path, data)]) == 1


def test_simulated_config_needs_one_source(tmp_path):
    data = sim_config(analyzer={"kind": "simulated"})
    assert run(["--quiet", "validate", "--config", write_config(tmp_path, data)]) == 1


def test_argument_errors(capsys):
    assert run(["--quiet", "explode"]) == 1
    assert run(["--quiet", "bench"]) == 1
    assert run(["--help"]) == 0


# =============================================================================
# TUNE
# =============================================================================

def test_tune_simulated(tmp_path, capsys):
    report = tmp_path / "report.jsonl"
    config = write_config(tmp_path, sim_config())
    assert run(["--quiet", "tune", "--config", config, "--report", str(report)]) == 0

    out = capsys.readouterr().out
    assert "Final setting: {" in out
    assert "Final alarm count: " in out
    assert "Command: --p0=" in out

    records = ReportService.read_records(report)
    assert isinstance(records[-1], FinalRecord)
    assert f"Final alarm count: {records[-1].final_alarm_count}" in out


def test_tune_is_deterministic(tmp_path):
    config = write_config(tmp_path, sim_config())
    reports = []
    for name in ("one.jsonl", "two.jsonl"):
        path = tmp_path / name
        assert run(["--quiet", "tune", "--config", config, "--report", str(path), "--no-timestamps"]) == 0
        reports.append(path.read_bytes())
    assert reports[0] == reports[1]


def test_tune_overrides(tmp_path):
    config = write_config(tmp_path, sim_config())
    report = tmp_path / "report.jsonl"
    assert run(["--quiet", "tune", "--config", config, "--report", str(report), "--budget", "254", "--seed", "9"]) == 0
    first_round = ReportService.read_records(report)[1]
    assert first_round.round_budget_seconds == pytest.approx(2.0)


def test_tune_rejects_bad_overrides(tmp_path):
    config = write_config(tmp_path, sim_config())
    assert run(["--quiet", "tune", "--config", config, "--jobs", "0"]) == 1
    assert run(["--quiet", "tune", "--config", config, "--budget", "-1"]) == 1


def test_tune_baseline_failure(tmp_path, capsys):
    config = write_config(tmp_path, sim_config(baseline_timeout=0.5))
    assert run(["--quiet", "tune", "--config", config]) == 2
    assert "Baseline analysis failed: timeout" in capsys.readouterr().out


def test_tune_external_stub(tmp_path, stub_script, capsys):
    script = stub_script("analyzer.sh", STUB_ANALYZER)
    config = write_config(tmp_path, external_config([script, "{params}"]))
    report = tmp_path / "report.jsonl"
    assert run(["--quiet", "tune", "--config", config, "--report", str(report)]) == 0

    out = capsys.readouterr().out
    assert "Final alarm count: 0" in out
    records = ReportService.read_records(report)
    assert records[0].a_uni_size == 3
    final = records[-1]
    assert final.final_setting["slevel"] >= 18
    assert final.final_setting["loop-unroll"] >= 14
    assert final.argv[0] == script


# =============================================================================
# RENDER
# =============================================================================

def test_render_setting(tmp_path, capsys):
    config = write_config(tmp_path, external_config(["analyzer", "{params}"]))
    assert run(["--quiet", "render", "--config", config, "--setting", '{"slevel": 18, "loop-unroll": 14}']) == 0
    assert capsys.readouterr().out.strip() == "analyzer --slevel=18 --loop-unroll=14"


def test_render_partial_setting_keeps_the_base(tmp_path, capsys):
    config = write_config(tmp_path, external_config(["analyzer", "{params}"]))
    assert run(["--quiet", "render", "--config", config, "--setting", '{"slevel": 18}']) == 0
    assert capsys.readouterr().out.strip() == "analyzer --slevel=18 --loop-unroll=4"


def test_render_initial_base(tmp_path, capsys):
    config = write_config(tmp_path, external_config(["analyzer", "--name={program}", "{params}"]))
    assert run(["--quiet", "render", "--config", config]) == 0
    assert capsys.readouterr().out.strip() == "analyzer --name=main --slevel=4 --loop-unroll=4"


@pytest.mark.parametrize("setting", ['{"plevel": 3}', '{"slevel": "inf"}', "[1, 2]", "{oops"])
def test_render_rejects_bad_settings(setting, tmp_path):
    config = write_config(tmp_path, external_config(["analyzer", "{params}"]))
    assert run(["--quiet", "render", "--config", config, "--setting", setting]) == 1


def test_render_from_report(tmp_path, capsys):
    config = write_config(tmp_path, sim_config())
    report = tmp_path / "report.jsonl"
    assert run(["--quiet", "tune", "--config", config, "--report", str(report)]) == 0
    command = next(
        line[len("Command: "):] for line in capsys.readouterr().out.splitlines() if line.startswith("Command: ")
    )

    assert run(["--quiet", "render", "--config", config, "--from-report", f"{report}:-1"]) == 0
    assert capsys.readouterr().out.strip() == command

    assert run(["--quiet", "render", "--config", config, "--from-report", f"{report}:0"]) == 0
    baseline = ReportService.read_records(report)[0].setting
    assert capsys.readouterr().out.strip() == " ".join(f"--{k}={v}" for k, v in sorted(baseline.items()))


@pytest.mark.parametrize("suffix", [":99", ":x", ""])
def test_render_from_bad_report_reference(suffix, tmp_path):
    config = write_config(tmp_path, sim_config())
    report = tmp_path / "report.jsonl"
    run(["--quiet", "tune", "--config", config, "--report", str(report)])
    assert run(["--quiet", "render", "--config", config, "--from-report", f"{report}{suffix}"]) == 1


# =============================================================================
# GENERATE / BENCH
# =============================================================================

def test_generate_then_bench(tmp_path, capsys):
    models = tmp_path / "models"
    assert run(["--quiet", "generate", "--out", str(models), "--count", "2", "--n-alarms", "5"]) == 0
    benches = sorted(models.glob("*.bench.json"))
    configs = sorted(models.glob("*.tune.json"))
    assert len(benches) == 2 and len(configs) == 2

    assert run(["--quiet", "validate", "--config", str(configs[0])]) == 0
    assert run(["--quiet", "tune", "--config", str(configs[0])]) == 0

    table = tmp_path / "table.csv"
    capsys.readouterr()
    assert run(["--quiet", "bench", "--models", str(models), "--seeds", "0,1", "--out", str(table)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].split() == ["strategy", "best", "tied", "overall"]
    assert len(table.read_text().splitlines()) == 1 + 2 * 2 * 3


def test_generate_skewed_configs_carry_the_budget(tmp_path):
    models = tmp_path / "models"
    assert run(["--quiet", "generate", "--out", str(models), "--family", "skewed", "--budget", "300"]) == 0
    (config,) = models.glob("*.tune.json")
    assert json.loads(config.read_text())["budget_seconds"] == 300


def test_bench_generated_in_memory(tmp_path, capsys):
    out = tmp_path / "table.jsonl"
    args = ["--quiet", "bench", "--generate", "2", "--strategies", "default,adaptive", "--num-refine", "3", "--out", str(out)]
    assert run(args) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 2 * 2 + 1
    summary = json.loads(lines[-1])["summary"]
    assert set(summary) == {"default", "adaptive"}


def test_bench_argument_errors(tmp_path):
    assert run(["--quiet", "bench", "--models", str(tmp_path)]) == 1
    assert run(["--quiet", "bench", "--generate", "1", "--strategies", "oracle"]) == 1
    assert run(["--quiet", "bench", "--generate", "1", "--budget", "0"]) == 1
    assert run(["--quiet", "generate", "--out", str(tmp_path), "--n-params", "0"]) == 1


def test_bench_with_official_ladder(tmp_path):
    ladder = tmp_path / "ladder.json"
    ladder.write_text(json.dumps([{"p0": 9, "decoy": False}]))
    out = tmp_path / "table.jsonl"
    args = ["--quiet", "bench", "--generate", "2", "--strategies", "default", "--ladder", str(ladder), "--out", str(out)]
    assert run(args) == 0
    summary = json.loads(out.read_text().splitlines()[-1])["summary"]
    assert set(summary) == {"default", "official"}


@pytest.mark.parametrize("content", ["not json", '{"skewed-0": {"p0": 1}}', '[1, 2]'])
def test_bench_rejects_bad_ladder_files(content, tmp_path):
    ladder = tmp_path / "ladder.json"
    ladder.write_text(content)
    assert run(["--quiet", "bench", "--generate", "1", "--ladder", str(ladder)]) == 1


def test_bench_ladder_must_cover_every_benchmark(tmp_path):
    ladder = tmp_path / "ladder.json"
    ladder.write_text(json.dumps({"skewed-0": [{"p0": 9, "decoy": False}]}))
    assert run(["--quiet", "bench", "--generate", "2", "--strategies", "default", "--ladder", str(ladder)]) == 1


def test_bench_hyper_options(tmp_path):
    out = tmp_path / "table.jsonl"
    args = [
        "--quiet", "bench", "--generate", "1", "--strategies", "adaptive",
        "--num-refine", "2", "--num-sample", "2", "--alpha", "0.2", "--beta-mode", "literal", "--beta", "0.1",
        "--out", str(out),
    ]
    assert run(args) == 0
    assert len(out.read_text().splitlines()) == 1 + 1


@pytest.mark.parametrize("option, value", [("--alpha", "2"), ("--num-sample", "0"), ("--beta", "-1"), ("--beta-mode", "halving")])
def test_bench_rejects_bad_hyper_options(option, value):
    assert run(["--quiet", "bench", "--generate", "1", option, value]) == 1
