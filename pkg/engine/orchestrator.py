"""
Tuning orchestrator
Runs the budgeted sample-analyze-refine loop over an analyzer's parameter space
"""
import logging
import math
import time
from typing import List, Optional, Tuple

from analyzers.base_analyzer import BaseAnalyzer
from core.codec import setting_to_json
from core.distributions import DeltaDist, JointDistribution, sample_setting, spawn_rngs
from core.errors import ContractViolation
from core.lattice import Setting, setting_leq
from core.outcome import AnalysisOutcome, FailureReason
from core.refinement import RefineInput, eta_scale, refine
from engine.dispatch import dispatch_round
from engine.models import HyperParams, RoundReport, Termination, TuneRequest, TuneResult
from services.report_service import BaselineRecord, FinalRecord

logger = logging.getLogger(__name__)


def extract(joint: JointDistribution) -> Tuple[Setting, List[DeltaDist]]:
    """Split a joint distribution into its one-point base and its deltas"""
    return joint.base, joint.deltas


def initial_round_budget(baseline_time: float, total_budget: float, hyper: HyperParams) -> float:
    """
    First round budget

    fit_series: max(alpha * time, T / (2^num_refine - 1)), so the doubling
    series over num_refine rounds sums to exactly T.
    literal: max(alpha * time, beta * T) with beta read as a fraction of T.
    """
    if not total_budget > 0:
        raise ContractViolation(f"budget must be positive, got {total_budget}")

    floor = hyper.alpha * baseline_time
    if hyper.beta_mode == "literal":
        return max(floor, hyper.beta * total_budget)
    rounds = max(hyper.num_refine, 1)
    # T * 2^-n / (1 - 2^-n) stays finite for any round count
    share = math.ldexp(total_budget, -rounds) / (1.0 - math.ldexp(1.0, -rounds))
    return max(floor, share)


class VirtualClock:
    """Clock advanced by reported analysis times instead of real time"""

    def __init__(self):
        self._now = 0.0

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float):
        self._now += seconds


class MonotonicClock:
    def __init__(self):
        self._start = time.monotonic()

    def now(self) -> float:
        return time.monotonic() - self._start

    def advance(self, seconds: float):
        pass


class TuneOrchestrator:
    """
    Owns the tuning loop

    Responsibilities:
    1. Run the baseline analysis and fix the alarm universe
    2. Sample settings and dispatch each round within its budget
    3. Refine base and delta from the round's results
    4. Double the round budget until the budget or the round count runs out
    5. Emit one report record per step
    """

    def __init__(self, request: TuneRequest):
        self.request = request
        self.analyzer: BaseAnalyzer = request.analyzer
        self.profile = request.profile
        self.clock = VirtualClock() if self.analyzer.virtual_time else MonotonicClock()

    def _emit(self, record):
        if self.request.report is not None:
            self.request.report.emit(record)

    def _safe_analyze(self, setting: Setting, deadline: float) -> AnalysisOutcome:
        try:
            return self.analyzer.analyze(self.request.program, setting, deadline)
        except ContractViolation:
            raise
        except Exception as e:
            logger.error(f"Analyzer raised under {setting}: {e}")
            return AnalysisOutcome.failed(setting, FailureReason.CRASH, detail=str(e))

    def _restrict(self, outcomes: List[AnalysisOutcome], a_uni) -> Tuple[List[AnalysisOutcome], int]:
        """Completed outcomes with alarms outside the universe dropped, and how many were dropped"""
        restricted, anomalies = [], 0
        for outcome in outcomes:
            if not outcome.is_completed:
                continue
            extra = outcome.alarms - a_uni
            if extra:
                anomalies += len(extra)
                logger.warning(
                    f"{len(extra)} alarm(s) under {outcome.setting} are not in the baseline universe; ignoring"
                )
            restricted.append(outcome.restricted_to(a_uni))
        return restricted, anomalies

    def _final_alarm_count(
        self,
        final: Setting,
        seen: List[AnalysisOutcome],
        deadline: float,
    ) -> Optional[int]:
        count = self.analyzer.alarm_count(final)
        if count is not None:
            return count
        for outcome in reversed(seen):
            if outcome.is_completed and outcome.setting == final:
                return len(outcome.alarms)

        scoring = self._safe_analyze(final, deadline)
        self.clock.advance(scoring.wall_time)
        if scoring.is_completed:
            return len(scoring.alarms)
        logger.warning(f"Scoring analysis under the final setting failed ({scoring.reason.value})")
        return None

    def _finish(self, result: TuneResult, argv_setting: Setting) -> TuneResult:
        try:
            argv = self.analyzer.render(argv_setting, self.request.program)
        except Exception as e:
            logger.error(f"Cannot render final setting {argv_setting}: {e}")
            argv = []
        result.total_wall_time = self.clock.now()
        self._emit(FinalRecord(
            final_setting=setting_to_json(self.profile, result.final_setting),
            argv=argv,
            final_alarm_count=result.final_alarm_count,
            a_uni_size=result.a_uni_size,
            rounds=len(result.rounds),
            anomalies=result.anomalies,
            total_wall_time=result.total_wall_time,
            termination=result.termination.value,
        ))
        logger.info(
            f"Tuning finished ({result.termination.value}) after {len(result.rounds)} round(s): "
            f"final setting {result.final_setting}, alarms {result.final_alarm_count}"
        )
        return result

    def run(self) -> TuneResult:
        req = self.request
        hyper = req.hyper
        base, delta = extract(req.initial)

        # Baseline: wall time and alarm universe
        baseline_deadline = req.baseline_timeout if req.baseline_timeout else math.inf
        baseline = self._safe_analyze(base, baseline_deadline)
        self.clock.advance(baseline.wall_time)
        self._emit(BaselineRecord(
            setting=setting_to_json(self.profile, base),
            status=baseline.status.value,
            reason=baseline.reason.value if baseline.reason else None,
            a_uni_size=len(baseline.alarms),
            time=baseline.wall_time,
        ))

        if not baseline.is_completed:
            logger.error(f"Baseline analysis failed: {baseline.reason.value} {baseline.detail}".rstrip())
            result = TuneResult(base, delta, 0, [], Termination.BASELINE_FAILED, baseline)
            return self._finish(result, base)

        a_uni = baseline.alarms
        logger.info(f"Baseline: {len(a_uni)} alarms in {baseline.wall_time:.3f}s under {base}")

        remaining = req.budget_seconds
        round_budget = initial_round_budget(baseline.wall_time, req.budget_seconds, hyper)
        round_rngs = spawn_rngs(req.seed, hyper.num_refine)

        rounds: List[RoundReport] = []
        seen: List[AnalysisOutcome] = [baseline]
        total_anomalies = 0
        count = 0

        baseline_exhausted = baseline.wall_time >= req.budget_seconds
        if baseline_exhausted:
            logger.info("Baseline used the whole budget; no refinement rounds")
            remaining = 0.0

        while remaining > 0 and count < hyper.num_refine:
            joint = JointDistribution.from_parts(self.profile, base, delta)
            sampled = sample_setting(joint, hyper.num_sample, round_rngs[count])

            dispatch = dispatch_round(req.program, sampled, round_budget, hyper.jobs, self.analyzer)
            self.clock.advance(dispatch.span)
            outcomes = dispatch.outcomes
            seen.extend(outcomes)

            r_list, anomalies = self._restrict(outcomes, a_uni)
            total_anomalies += anomalies
            new_base, new_delta = refine(RefineInput(sampled, r_list, a_uni, base, delta))
            eta = eta_scale(len(r_list), len(sampled))

            if not setting_leq(base, new_base):
                raise ContractViolation(f"refinement moved the base down: {base} -> {new_base}")

            remaining -= round_budget
            report = RoundReport(
                round_index=count,
                round_budget_seconds=round_budget,
                sampled=sampled,
                outcomes=outcomes,
                eta=eta,
                base_after=new_base,
                delta_after=new_delta,
                remaining_budget_seconds=remaining,
                alarms_under_base_after=self.analyzer.alarm_count(new_base),
                anomalies=anomalies,
            )
            rounds.append(report)
            self._emit(report.to_record(self.profile))
            logger.info(
                f"Round {count}: {report.completed}/{len(sampled)} completed in budget {round_budget:.3f}s, "
                f"eta={eta:.4f}, base {base} -> {new_base}"
            )

            base, delta = new_base, new_delta
            round_budget *= 2
            count += 1

        if count >= hyper.num_refine and not baseline_exhausted:
            termination = Termination.REFINE_COUNT_REACHED
        else:
            termination = Termination.BUDGET_EXHAUSTED

        last_budget = rounds[-1].round_budget_seconds if rounds else baseline_deadline
        result = TuneResult(
            final_setting=base,
            final_delta=list(delta),
            a_uni_size=len(a_uni),
            rounds=rounds,
            termination=termination,
            baseline=baseline,
            anomalies=total_anomalies,
        )
        result.final_alarm_count = self._final_alarm_count(base, seen, last_budget)
        return self._finish(result, base)


def tune(request: TuneRequest) -> TuneResult:
    """Run one tuning session"""
    return TuneOrchestrator(request).run()
