"""
Simulated analyzer: domination semantics, cost model, benchmark generation
"""
import itertools
import json
import math

import pytest

from analyzers.sim_analyzer import (
    SKEWED_ALARMS,
    BenchKnobs,
    SimAlarm,
    SimBenchmark,
    SimModel,
    SimulatedAnalyzer,
    diagonal_ladder,
    gen_benchmark,
    gen_skewed_benchmark,
    sim_analyze,
    skewed_budget,
)
from core.errors import ContractViolation, RenderError
from core.lattice import (
    INFINITY,
    BoolValue,
    EnumValue,
    IntValue,
    ParamSpec,
    ParamType,
    Setting,
    make_profile,
    setting_leq,
    setting_meet,
    top_setting,
)
from core.outcome import FailureReason


def test_worked_thresholds(worked_model):
    outcome = sim_analyze(worked_model, Setting.ints(12, 14), math.inf)
    assert outcome.is_completed
    assert outcome.alarms == {"a2"}


def test_join_of_thresholds_eliminates_everything(worked_model):
    assert sim_analyze(worked_model, Setting.ints(18, 14), math.inf).alarms == frozenset()


def test_bottom_keeps_everything(worked_model):
    assert sim_analyze(worked_model, Setting.ints(0, 0), math.inf).alarms == worked_model.universe


def test_top_eliminates_everything(worked_model, int_profile):
    assert worked_model.alarms_under(top_setting(int_profile)) == frozenset()


def test_cost_and_deadline(int_profile):
    model = SimModel(int_profile, (), base_cost=2.0, cost_weights=(0.5, 0.0))
    assert model.cost(Setting.ints(4, 100)) == pytest.approx(2.0 * 3.0)

    done = sim_analyze(model, Setting.ints(4, 0), 6.0)
    assert done.is_completed and done.wall_time == pytest.approx(6.0)

    late = sim_analyze(model, Setting.ints(4, 0), 5.0)
    assert late.reason == FailureReason.TIMEOUT
    assert late.wall_time == pytest.approx(5.0)


def test_failure_cap(int_profile):
    model = SimModel(int_profile, (), base_cost=1.0, cost_weights=(1.0, 0.0), failure_cap=3.0)
    assert sim_analyze(model, Setting.ints(2, 0), math.inf).is_completed
    capped = sim_analyze(model, Setting.ints(3, 0), math.inf)
    assert not capped.is_completed
    assert capped.wall_time == pytest.approx(4.0)


def test_model_validation(int_profile):
    with pytest.raises(ContractViolation):
        SimModel(int_profile, (), base_cost=0.0, cost_weights=(0.0, 0.0))
    with pytest.raises(ContractViolation):
        SimModel(int_profile, (), base_cost=1.0, cost_weights=(0.0,))
    with pytest.raises(ContractViolation):
        SimAlarm("a", ())
    with pytest.raises(ContractViolation):
        SimAlarm("a", (Setting.of(IntValue(INFINITY), IntValue(0)),))
    dup = SimAlarm("a", (Setting.ints(1, 1),))
    with pytest.raises(ContractViolation):
        SimModel(int_profile, (dup, dup), base_cost=1.0, cost_weights=(0.0, 0.0))


def test_monotone_by_brute_force():
    bench = gen_benchmark(5, BenchKnobs(n_params=2, n_alarms=8, max_threshold=6))
    model = bench.model
    grid = [Setting.ints(x, y) for x, y in itertools.product(range(7), repeat=2)]
    for p, q in itertools.product(grid, repeat=2):
        if setting_leq(p, q):
            assert model.alarms_under(q) <= model.alarms_under(p)
            assert model.cost(p) <= model.cost(q)


def test_non_principal_family_is_still_monotone():
    bench = gen_benchmark(3, BenchKnobs(n_params=2, n_alarms=6, max_threshold=5, non_principal=True))
    assert bench.id.endswith("-np")
    assert all(len(a.thresholds) == 2 for a in bench.model.alarms)
    grid = [Setting.ints(x, y) for x, y in itertools.product(range(6), repeat=2)]
    for p, q in itertools.product(grid, repeat=2):
        if setting_leq(p, q):
            assert bench.model.alarms_under(q) <= bench.model.alarms_under(p)


def test_generation_is_deterministic():
    knobs = BenchKnobs(n_params=3, n_alarms=10)
    assert gen_benchmark(11, knobs) == gen_benchmark(11, knobs)
    assert gen_benchmark(11, knobs) != gen_benchmark(12, knobs)
    assert gen_skewed_benchmark(4) == gen_skewed_benchmark(4)


def test_generator_shape():
    bench = gen_benchmark(0, BenchKnobs(n_params=3, n_alarms=5, max_threshold=20))
    assert bench.id == "sim-0-n3-a5"
    assert len(bench.model.alarms) == 5
    easy = bench.model.alarms[0].thresholds[0]
    assert sorted(v.v for v in easy) == [0, 0, 1]
    hard = bench.model.alarms[1].thresholds[0]
    assert 20 in [v.v for v in hard]


def test_empty_model():
    bench = gen_benchmark(1, BenchKnobs(n_alarms=0))
    assert bench.model.alarms == ()
    assert sim_analyze(bench.model, bench.initial.base, math.inf).alarms == frozenset()


def test_benchmark_json_round_trip():
    for bench in (gen_benchmark(9, BenchKnobs(n_params=2, non_principal=True)), gen_skewed_benchmark(2)):
        assert SimBenchmark.from_dict(json.loads(json.dumps(bench.to_dict()))) == bench


def test_skewed_family():
    bench = gen_skewed_benchmark(0, base_cost=2.0)
    assert bench.family == "skewed"
    assert len(bench.model.alarms) == SKEWED_ALARMS
    assert skewed_budget(2.0) == pytest.approx(127 * 4 * 2.0)

    decoy_on = Setting.of(IntValue(20), BoolValue(1))
    assert not sim_analyze(bench.model, decoy_on, math.inf).is_completed
    targeted = Setting.of(IntValue(20), BoolValue(0))
    result = sim_analyze(bench.model, targeted, math.inf)
    assert result.is_completed and result.alarms == frozenset()


def test_diagonal_ladder_is_increasing(mixed_profile):
    ladder = diagonal_ladder(mixed_profile, 20, 12)
    assert len(ladder) == 12
    assert ladder[0][0] == IntValue(0)
    assert ladder[-1][0] == IntValue(20)
    for lower, upper in zip(ladder, ladder[1:]):
        assert setting_leq(lower, upper) and lower != upper


def test_diagonal_ladder_drops_repeated_rungs():
    profile = make_profile([
        ParamSpec("flag", ParamType.boolean()),
        ParamSpec("mode", ParamType.ordered_enum(["low", "high"])),
    ])
    ladder = diagonal_ladder(profile, 20, 12)
    assert ladder == [
        Setting.of(BoolValue(0), EnumValue(0)),
        Setting.of(BoolValue(1), EnumValue(1)),
    ]


def test_analyzer_wrapper(worked_model):
    analyzer = SimulatedAnalyzer(worked_model)
    assert analyzer.virtual_time
    assert analyzer.alarm_count(Setting.ints(12, 14)) == 1
    assert analyzer.render(Setting.ints(18, 14)) == ["--slevel=18", "--loop-unroll=14"]
    with pytest.raises(RenderError):
        analyzer.render(Setting.of(IntValue(INFINITY), IntValue(1)))


def test_meet_of_eliminators_still_eliminates():
    for seed in range(5):
        model = gen_benchmark(seed, BenchKnobs(n_params=2, n_alarms=6, max_threshold=5)).model
        grid = [Setting.ints(x, y) for x, y in itertools.product(range(6), repeat=2)]
        for alarm in model.alarms:
            eliminators = [p for p in grid if alarm.eliminated_by(p)]
            for p, q in itertools.product(eliminators, repeat=2):
                assert alarm.eliminated_by(setting_meet(p, q))
