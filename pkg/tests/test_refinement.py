"""
Refining the base from one round of results and rescaling the delta
"""
import math

import pytest

from analyzers.sim_analyzer import BenchKnobs, gen_benchmark, sim_analyze
from core.distributions import Bernoulli, Poisson, make_rng, sample_setting
from core.errors import ContractViolation
from core.lattice import Setting, setting_leq
from core.outcome import AnalysisOutcome, FailureReason
from core.refinement import RefineInput, eliminator_meet, eta_scale, refine, refine_base

A_UNI = frozenset({"a1", "a2", "a3"})

WORKED = [
    (Setting.ints(12, 14), {"a2"}),
    (Setting.ints(16, 21), {"a2"}),
    (Setting.ints(24, 19), set()),
    (Setting.ints(26, 12), {"a1"}),
    (Setting.ints(20, 16), set()),
    (Setting.ints(18, 9), {"a1"}),
]


def completed(setting, alarms):
    return AnalysisOutcome.completed(setting, alarms, 1.0)


def worked_input(delta=()):
    p_list = [s for s, _ in WORKED]
    r_list = [completed(s, a) for s, a in WORKED]
    return RefineInput(p_list, r_list, A_UNI, Setting.ints(4, 4), delta)


def test_worked_example():
    refine_in = worked_input()
    assert eliminator_meet("a1", refine_in.r_list) == Setting.ints(12, 14)
    assert eliminator_meet("a2", refine_in.r_list) == Setting.ints(18, 9)
    assert eliminator_meet("a3", refine_in.r_list) == Setting.ints(12, 9)
    assert refine_base(refine_in) == Setting.ints(18, 14)


def test_worked_example_scales_delta_by_thirteen_sixths():
    base, delta = refine(worked_input([Poisson(20.0), Poisson(6.0)]))
    assert base == Setting.ints(18, 14)
    assert delta[0].lam == pytest.approx(20.0 * 13 / 6)
    assert delta[1].lam == pytest.approx(13.0)


def test_no_results_keeps_base():
    refine_in = RefineInput([Setting.ints(9, 9)], [], A_UNI, Setting.ints(4, 4), [Poisson(10.0)])
    base, delta = refine(refine_in)
    assert base == Setting.ints(4, 4)
    assert delta == [Poisson(10.0)]


def test_all_failed_shrinks_delta():
    p_list = [Setting.ints(5, 5), Setting.ints(6, 6), Setting.ints(7, 7), Setting.ints(8, 8)]
    refine_in = RefineInput(p_list, [], A_UNI, Setting.ints(4, 4), [Poisson(10.0), Bernoulli(0.5)])
    base, delta = refine(refine_in)
    assert base == Setting.ints(4, 4)
    assert delta[0] == Poisson(2.5)
    assert delta[1].q == pytest.approx(1 - 0.5 ** 0.25)


def test_no_eliminator_keeps_base():
    p_list = [Setting.ints(12, 14), Setting.ints(30, 30)]
    r_list = [completed(p, A_UNI) for p in p_list]
    assert refine_base(RefineInput(p_list, r_list, A_UNI, Setting.ints(4, 4))) == Setting.ints(4, 4)


def test_single_eliminating_setting_moves_base():
    p = Setting.ints(7, 2)
    refine_in = RefineInput([p], [completed(p, {"a2", "a3"})], A_UNI, Setting.ints(4, 4))
    assert refine_base(refine_in) == Setting.ints(7, 4)


@pytest.mark.parametrize("completed_count, sampled, eta", [(4, 4, 2.25), (0, 4, 0.25), (1, 4, 0.75), (6, 6, 13 / 6)])
def test_eta(completed_count, sampled, eta):
    assert eta_scale(completed_count, sampled) == pytest.approx(eta)


def test_eta_contract():
    with pytest.raises(ContractViolation):
        eta_scale(0, 0)
    with pytest.raises(ContractViolation):
        eta_scale(5, 4)


def test_input_validation():
    p = Setting.ints(1, 1)
    with pytest.raises(ContractViolation):
        RefineInput([], [], A_UNI, p)
    with pytest.raises(ContractViolation):
        RefineInput([p], [completed(Setting.ints(2, 2), set())], A_UNI, p)
    with pytest.raises(ContractViolation):
        RefineInput([p], [completed(p, set()), completed(p, set())], A_UNI, p)
    with pytest.raises(ContractViolation):
        RefineInput([p], [AnalysisOutcome.failed(p, FailureReason.TIMEOUT)], A_UNI, p)


def test_duplicate_samples_may_both_complete():
    p = Setting.ints(3, 3)
    refine_in = RefineInput([p, p], [completed(p, {"a1"}), completed(p, {"a1"})], A_UNI, Setting.ints(0, 0))
    assert refine_base(refine_in) == p


# =============================================================================
# BRUTE-FORCE ORACLE
# =============================================================================

def oracle_base(base, a_uni, r_list):
    """Join over alarms of the meet of their eliminators, written as plain loops over integers"""
    result = list(base.values[i].v for i in range(len(base)))
    for alarm in a_uni:
        p_a = None
        for outcome in r_list:
            if alarm in outcome.alarms:
                continue
            values = [v.v for v in outcome.setting]
            p_a = values if p_a is None else [min(x, y) for x, y in zip(p_a, values)]
        if p_a is not None:
            result = [max(x, y) for x, y in zip(result, p_a)]
    return Setting.ints(*result)


def random_setting(rng, n):
    return Setting.ints(*(int(x) for x in rng.integers(0, 9, size=n)))


def random_instance(rng):
    n = int(rng.integers(1, 4))
    alarms = [f"a{i}" for i in range(int(rng.integers(0, 7)))]
    base = random_setting(rng, n)
    p_list = [random_setting(rng, n) for _ in range(int(rng.integers(1, 7)))]
    r_list = [
        completed(p, {a for a in alarms if rng.random() < 0.5})
        for p in p_list
        if rng.random() < 0.7
    ]
    return RefineInput(p_list, r_list, frozenset(alarms), base)


def test_refine_base_matches_oracle():
    rng = make_rng(20240601)
    for _ in range(1000):
        refine_in = random_instance(rng)
        assert refine_base(refine_in) == oracle_base(refine_in.base, refine_in.a_uni, refine_in.r_list)


def test_refined_base_never_drops():
    rng = make_rng(99)
    for _ in range(300):
        refine_in = random_instance(rng)
        assert setting_leq(refine_in.base, refine_base(refine_in))


def test_refined_base_keeps_every_sampled_elimination():
    for seed in range(50):
        bench = gen_benchmark(seed, BenchKnobs(n_params=2, n_alarms=6, max_threshold=6))
        model = bench.model
        base = bench.initial.base
        sampled = sample_setting(bench.initial, 8, make_rng(seed))
        r_list = [sim_analyze(model, p, math.inf) for p in sampled]
        a_uni = model.alarms_under(base)
        new_base = refine_base(RefineInput(sampled, r_list, a_uni, base))

        eliminated = {a for a in a_uni if any(a not in r.alarms for r in r_list)}
        assert not eliminated & model.alarms_under(new_base)
        for alarm in model.alarms:
            if alarm.alarm_id in eliminated:
                p_a = eliminator_meet(alarm.alarm_id, r_list)
                assert any(setting_leq(t, p_a) for t in alarm.thresholds)
